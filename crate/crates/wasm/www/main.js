import init, { listRoots, compile, coefficients } from "./pkg/christol_wasm.js";

const $ = (id) => document.getElementById(id);
const COLUMNS = 64;
const ROWS = 64;

function inputs() {
  return {
    field: $("field").value,
    poly: $("poly").value,
    root: Number.parseInt($("root").value, 10),
  };
}

function status(text, isError = false) {
  $("status").textContent = text;
  $("status").className = isError ? "error" : "";
}

function guarded(action) {
  return () => {
    try {
      action();
    } catch (e) {
      status(String(e.message ?? e), true);
    }
  };
}

function showRoots() {
  const { field, poly } = inputs();
  const list = JSON.parse(listRoots(field, poly));
  const lines = list.roots.map((p, k) => `${k}: (${p.join(", ")})`);
  $("summary").textContent = `Resultant order r = ${list.r}. Root prefixes of length ${list.r + 1}:`;
  $("table").innerHTML = "";
  $("dot").textContent = "";
  $("report").textContent = lines.length ? lines.join("\n") : "no power-series root";
  status(`${list.roots.length} root(s)`);
}

function transitionTable(automaton) {
  const q = automaton.q;
  const head = ["state", "output", ...Array.from({ length: q }, (_, d) => `digit ${d}`)];
  const rows = automaton.delta.map((row, s) => {
    const mark = s === automaton.initial ? "&rarr; " : "";
    const cells = row.map((t) => `<td>${t}</td>`).join("");
    return `<tr><td>${mark}${s}</td><td>${automaton.outputs[s]}</td>${cells}</tr>`;
  });
  return `<table><tr>${head.map((h) => `<th>${h}</th>`).join("")}</tr>${rows.join("")}</table>`;
}

function showCompile() {
  const { field, poly, root } = inputs();
  const forward = $("forward").checked;
  const out = JSON.parse(compile(field, poly, root, forward, 1024));
  const r = out.report;
  const parts = [`d = ${r.d}, h = ${r.h}, r = ${r.r}`, `minimal reverse automaton: ${r.comp_reverse} states`];
  if (r.comp_forward !== null) parts.push(`minimal forward automaton: ${r.comp_forward} states`);
  if (r.verification) parts.push(`checked against the series: ${r.verification.ok ? "ok" : "not certified"}`);
  $("summary").textContent = parts.join("; ");
  const shown = out.reverse.delta.length <= 64;
  $("table").innerHTML = shown
    ? `<h3>Reverse reading (least significant digit first)</h3>${transitionTable(out.reverse)}`
    : "<p>Automaton too large to tabulate; see the DOT source.</p>";
  $("dot").textContent = out.reverse_dot + (out.forward_dot ? "\n" + out.forward_dot : "");
  $("report").textContent = JSON.stringify(r, null, 2);
  status("compiled");
}

function drawCoefficients() {
  const { field, poly, root } = inputs();
  const values = coefficients(field, poly, root, COLUMNS * ROWS);
  const canvas = $("grid");
  const ctx = canvas.getContext("2d");
  const cw = canvas.width / COLUMNS;
  const ch = canvas.height / ROWS;
  const top = Math.max(1, ...values);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  values.forEach((v, n) => {
    const shade = 255 - Math.round((200 * v) / top);
    ctx.fillStyle = v === 0 ? "#fff" : `hsl(${(v * 137) % 360}, 60%, ${Math.round((shade / 255) * 60)}%)`;
    ctx.fillRect((n % COLUMNS) * cw, Math.floor(n / COLUMNS) * ch, cw, ch);
  });
  status(`drew a_0 .. a_${values.length - 1}`);
}

await init();
$("list").addEventListener("click", guarded(showRoots));
$("compile").addEventListener("click", guarded(showCompile));
$("draw").addEventListener("click", guarded(drawCoefficients));
guarded(drawCoefficients)();
