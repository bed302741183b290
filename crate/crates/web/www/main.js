import init, { solve, epsilon_sweep, partition_landscape, urn_preset } from "./pkg/limid_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => (typeof x === "number" ? Number(x.toPrecision(12)).toString() : String(x));

function show(target, run) {
  const started = performance.now();
  try {
    const node = run();
    const ms = (performance.now() - started).toFixed(1);
    target.replaceChildren(node, text("p", `${ms} ms`));
  } catch (err) {
    target.replaceChildren(text("p", String(err.message ?? err), "error"));
  }
}

function text(tag, content, cls) {
  const el = document.createElement(tag);
  el.textContent = content;
  if (cls) el.className = cls;
  return el;
}

function table(header, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  header.forEach((h) => head.appendChild(text("th", h)));
  rows.forEach((r) => {
    const tr = t.insertRow();
    r.forEach((c) => (tr.insertCell().textContent = fmt(c)));
  });
  return t;
}

function numbers(input) {
  return input.split(/[\s,]+/).filter(Boolean).map(Number);
}

function loadUrn() {
  $("diagram").value = urn_preset(Number($("urn-n").value), Number($("urn-variant").value));
}

await init();
loadUrn();

$("load-urn").onclick = loadUrn;

$("solve").onclick = () =>
  show($("solve-out"), () => {
    const r = JSON.parse(solve($("diagram").value, $("order").value, Number($("epsilon").value)));
    const box = document.createElement("div");
    box.append(
      text("p", `MEU ${fmt(r.meu)}, width ${r.stats.width}, largest set ${r.stats.max_set_cardinality}, strategies ${r.stats.strategy_count}`),
      text("pre", JSON.stringify(r.strategy.policies, null, 2)),
    );
    return box;
  });

$("sweep").onclick = () =>
  show($("sweep-out"), () => {
    const eps = new Float64Array(numbers($("eps-list").value));
    const rows = JSON.parse(epsilon_sweep($("diagram").value, $("order").value, eps));
    return table(
      ["ε", "value", "ratio to exact", "largest set"],
      rows.map((r) => [r.epsilon ?? "exact", r.meu, r.ratio, r.max_set_cardinality]),
    );
  });

$("partition").onclick = () =>
  show($("partition-out"), () => {
    const r = JSON.parse(partition_landscape(new Uint32Array(numbers($("numbers").value))));
    const box = document.createElement("div");
    box.append(
      text("p", `Solver value ${fmt(r.meu)}; an even split reaches ${fmt(r.threshold)}.`),
      table(
        ["first set", "sum", "other sum", "value"],
        r.subsets.map((s) => [s.chosen.map((c, i) => (c ? i + 1 : null)).filter((x) => x).join(" ") || "∅", s.left, s.right, s.value]),
      ),
    );
    return box;
  });
