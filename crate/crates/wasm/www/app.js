import init, { trees, buildHodge, transfer, examples } from "./pkg/hodge_wasm.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

// "(x (x x))" -> nested arrays, leaves as null
function parseTree(text) {
  let i = 0;
  function node() {
    if (text[i] === "x") { i += 1; return null; }
    i += 1;
    const children = [];
    while (text[i] !== ")") {
      if (text[i] === " ") { i += 1; continue; }
      children.push(node());
    }
    i += 1;
    return children;
  }
  return node();
}

function height(t) {
  return t === null ? 0 : 1 + Math.max(...t.map(height));
}

function drawTree(text) {
  const tree = parseTree(text);
  const h = height(tree);
  const step = 22, gap = 18, pad = 10;
  let leaf = 0;
  const edges = [], dots = [];
  // returns the node position; leaves sit on the bottom row
  function place(t, depth) {
    if (t === null) {
      const p = { x: pad + leaf * gap, y: pad + (h + 1) * step };
      leaf += 1;
      return p;
    }
    const kids = t.map((c) => place(c, depth + 1));
    const p = { x: kids.reduce((s, k) => s + k.x, 0) / kids.length, y: pad + (h - height(t) + 1) * step };
    kids.forEach((k) => edges.push([p, k]));
    dots.push(p);
    return p;
  }
  const root = place(tree, 0);
  edges.push([{ x: root.x, y: pad }, root]);
  const svg = document.createElementNS(SVG, "svg");
  svg.setAttribute("width", 2 * pad + (leaf - 1) * gap);
  svg.setAttribute("height", 2 * pad + (h + 1) * step);
  for (const [a, b] of edges) {
    const l = document.createElementNS(SVG, "line");
    l.setAttribute("x1", a.x); l.setAttribute("y1", a.y);
    l.setAttribute("x2", b.x); l.setAttribute("y2", b.y);
    l.setAttribute("stroke", "#333");
    svg.appendChild(l);
  }
  for (const p of dots) {
    const c = document.createElementNS(SVG, "circle");
    c.setAttribute("cx", p.x); c.setAttribute("cy", p.y); c.setAttribute("r", 3.5);
    svg.appendChild(c);
  }
  return svg;
}

function showTrees() {
  const box = $("trees");
  box.textContent = "";
  try {
    const data = JSON.parse(trees(Number($("n").value)));
    $("count").textContent = `${data.count} trees`;
    for (const t of data.trees) {
      const div = document.createElement("div");
      div.className = "tree";
      div.appendChild(drawTree(t.tree));
      const code = document.createElement("code");
      code.textContent = t.plan;
      div.appendChild(code);
      box.appendChild(div);
    }
  } catch (e) {
    $("count").textContent = String(e.message ?? e);
  }
}

function matrixTable(rows) {
  const table = document.createElement("table");
  table.className = "m";
  for (const row of rows) {
    const tr = table.insertRow();
    for (const x of row) tr.insertCell().textContent = x;
  }
  return table;
}

function heading(text) {
  const h = document.createElement("h3");
  h.textContent = text;
  return h;
}

function verdicts(obj) {
  const ul = document.createElement("ul");
  ul.className = "verdicts";
  for (const [k, v] of Object.entries(obj)) {
    if (typeof v !== "boolean") continue;
    const li = document.createElement("li");
    li.className = v ? "ok" : "bad";
    li.textContent = `${v ? "✓" : "✗"} ${k}`;
    ul.appendChild(li);
  }
  return ul;
}

function arityLine(name, report) {
  const p = document.createElement("p");
  const bad = report.arities.filter((a) => !a.pass).map((a) => a.n);
  p.className = bad.length ? "bad" : "ok";
  p.textContent = bad.length ? `${name}: fails at n = ${bad.join(", ")}` : `${name}: holds for n ≤ ${report.cutoff}`;
  return p;
}

function summary(report) {
  const p = document.createElement("p");
  p.className = report.pass ? "ok" : "bad";
  p.textContent = report.pass ? "pass" : `fail${report.error ? ": " + report.error.message : ""}`;
  return p;
}

function showHodge() {
  const report = JSON.parse(buildHodge($("input").value));
  const out = $("result");
  out.textContent = "";
  out.appendChild(summary(report));
  if (report.s) {
    out.append(heading("s"), matrixTable(report.s), heading("t"), matrixTable(report.t), heading("axioms"), verdicts(report.report));
  }
  $("raw").textContent = JSON.stringify(report, null, 2);
}

function showTransfer() {
  const report = JSON.parse(transfer($("input").value, Number($("cutoff").value)));
  const out = $("result");
  out.textContent = "";
  out.appendChild(summary(report));
  if (report.model) {
    const names = report.harmonic_basis.names;
    out.appendChild(heading(`harmonic basis (${names.length})`));
    names.forEach((n, k) => {
      const p = document.createElement("p");
      p.textContent = `${n} = (${report.harmonic_basis.vectors[k].join(", ")})`;
      out.appendChild(p);
    });
    out.appendChild(heading("operations"));
    for (const op of report.model.m) {
      const p = document.createElement("p");
      p.textContent = `m_${op.n}: ` + op.entries.map((e) => `${e.c}·(${e.in.map((i) => names[i]).join(",")} → ${names[e.out]})`).join("  ");
      out.appendChild(p);
    }
    if (!report.model.m.length) out.appendChild(document.createTextNode("all operations vanish"));
    out.append(heading("checks"), arityLine("Stasheff", report.report.stasheff), arityLine("cyclicity", report.report.cyclic),
      verdicts({ minimal: report.report.minimal, form_nondegenerate: report.report.form_nondegenerate }));
  }
  $("raw").textContent = JSON.stringify(report, null, 2);
}

await init();
const bundled = JSON.parse(examples());
for (const name of Object.keys(bundled)) {
  const o = document.createElement("option");
  o.value = o.textContent = name;
  $("example").appendChild(o);
}
$("example").onchange = () => { $("input").value = bundled[$("example").value]; };
$("input").value = bundled[Object.keys(bundled)[0]];
$("draw").onclick = showTrees;
$("hodge").onclick = showHodge;
$("transfer").onclick = showTransfer;
$("status").textContent = "Ready.";
showTrees();
