import init, { sequential_measurement, qubit_domains, evaluate_statement } from "./pkg/qlat_wasm.js";

const $ = (id) => document.getElementById(id);
const rad = (deg) => (deg * Math.PI) / 180;

function call(f, ...args) {
  try {
    return { ok: JSON.parse(f(...args)) };
  } catch (e) {
    return { err: String(e) };
  }
}

function atomAngles() {
  return new Float64Array(
    $("dom-atoms").value.split(",").map((s) => s.trim()).filter((s) => s !== "").map((s) => rad(Number(s)))
  );
}

// ---- sequential measurement ----

let sweep = [];

function plotSequential(current) {
  const cv = $("seq-plot"), g = cv.getContext("2d");
  const W = cv.width, H = cv.height, pad = 36;
  const x = (deg) => pad + ((W - 2 * pad) * deg) / 180;
  const y = (p) => H - pad - (H - 2 * pad) * (p / 0.6);
  g.clearRect(0, 0, W, H);
  g.strokeStyle = "#999"; g.fillStyle = "#555"; g.font = "12px sans-serif";
  g.beginPath(); g.moveTo(pad, pad / 2); g.lineTo(pad, H - pad); g.lineTo(W - pad / 2, H - pad); g.stroke();
  for (const d of [0, 45, 90, 135, 180]) g.fillText(`${d}°`, x(d) - 10, H - pad + 16);
  for (const p of [0, 0.25, 0.5]) { g.fillText(p.toFixed(2), 2, y(p) + 4); }
  g.strokeStyle = "#1565c0"; g.lineWidth = 2; g.beginPath();
  for (let d = 0; d <= 180; d++) {
    const p = Math.sin(rad(d)) ** 2 / 2;
    d === 0 ? g.moveTo(x(d), y(p)) : g.lineTo(x(d), y(p));
  }
  g.stroke(); g.lineWidth = 1;
  g.fillStyle = "#e65100";
  for (const r of sweep) { g.beginPath(); g.arc(x((r.theta * 180) / Math.PI), y(r.frequency), 3, 0, 2 * Math.PI); g.fill(); }
  if (current) {
    g.fillStyle = "#2e7d32";
    g.beginPath(); g.arc(x((current.theta * 180) / Math.PI), y(current.frequency), 5, 0, 2 * Math.PI); g.fill();
  }
}

function updateSequential() {
  const deg = Number($("seq-theta").value);
  $("seq-theta-val").textContent = `${deg}°`;
  const r = call(sequential_measurement, rad(deg), Number($("seq-trials").value), BigInt($("seq-seed").value || 0));
  if (r.err) { $("seq-out").innerHTML = `<span class="err">${r.err}</span>`; return; }
  const o = r.ok;
  $("seq-out").textContent =
    `exact ${o.analytic.toFixed(4)}  simulated ${o.frequency.toFixed(4)} over ${o.trials} trials  ` +
    `commute: ${o.commute}  non-disturbing: ${o.non_disturbing}`;
  plotSequential(o);
}

function runSweep() {
  const trials = Math.min(Number($("seq-trials").value), 20000);
  sweep = [];
  for (let d = 0; d <= 180; d += 7.5) {
    const r = call(sequential_measurement, rad(d), trials, BigInt(d * 10));
    if (r.ok) sweep.push(r.ok);
  }
  updateSequential();
}

// ---- domains ----

function drawBloch(stateAngle, angles, domains) {
  const cv = $("dom-plot"), g = cv.getContext("2d");
  const c = cv.width / 2, R = c - 30;
  // polar angle measured from +z (up) towards +x (right)
  const pt = (t, r = R) => [c + r * Math.sin(t), c - r * Math.cos(t)];
  g.clearRect(0, 0, cv.width, cv.height);
  g.strokeStyle = "#bbb"; g.beginPath(); g.arc(c, c, R, 0, 2 * Math.PI); g.stroke();
  g.fillStyle = "#555"; g.font = "12px sans-serif";
  g.fillText("|0⟩", c - 8, 14); g.fillText("|1⟩", c - 8, cv.height - 4);
  angles.forEach((t, i) => {
    const label = `a${i}`;
    const color = domains.certainly_true.includes(label) ? "#1b7f3a"
      : domains.certainly_false.includes(label) ? "#b00020" : "#999";
    const [px, py] = pt(t);
    g.fillStyle = color; g.beginPath(); g.arc(px, py, 6, 0, 2 * Math.PI); g.fill();
    const [lx, ly] = pt(t, R + 16); g.fillText(label, lx - 8, ly + 4);
  });
  const [sx, sy] = pt(stateAngle);
  g.strokeStyle = "#1565c0"; g.lineWidth = 3; g.beginPath(); g.moveTo(c, c); g.lineTo(sx, sy); g.stroke(); g.lineWidth = 1;
}

function updateDomains() {
  const deg = Number($("dom-state").value);
  $("dom-state-val").textContent = `${deg}°`;
  const angles = atomAngles();
  const r = call(qubit_domains, rad(deg), angles);
  if (r.err) { $("dom-out").innerHTML = `<span class="err">${r.err}</span>`; return; }
  const d = r.ok.domains;
  const rows = d.labels.map((l, i) => {
    const v = d.certainly_true.includes(l) ? '<span class="true">true</span>'
      : d.certainly_false.includes(l) ? '<span class="false">false</span>' : '<span class="undefined">undefined</span>';
    return `<tr><td class="mono">${l}</td><td>${d.probabilities[i].toFixed(4)}</td><td>${v}</td>` +
      `<td>${d.compatible.includes(l) ? "yes" : "no"}</td><td>${r.ok.pivot_residuals[i].toExponential(1)}</td></tr>`;
  });
  $("dom-out").innerHTML =
    `<table><tr><th>property</th><th>Born probability</th><th>value</th><th>compatible</th><th>split residual</th></tr>${rows.join("")}</table>` +
    `<p>predictable = compatible: <b>${d.predictable_is_compatible.holds}</b>; objective = predictable: <b>${d.objective_is_predictable}</b></p>`;
  drawBloch(rad(deg), Array.from(angles), d);
  updateStatement();
}

// ---- statements ----

function updateStatement() {
  const r = call(evaluate_statement, $("ev-stmt").value, rad(Number($("dom-state").value)), atomAngles());
  if (r.err) { $("ev-out").innerHTML = `<p class="err">${r.err}</p>`; return; }
  const e = r.ok.evaluation;
  const tv = (v) => `<span class="${v}">${v}</span>`;
  $("ev-out").innerHTML =
    `<table><tr><th>canonical form</th><td class="mono">${r.ok.statement}</td></tr>` +
    `<tr><th>verificationist value</th><td>${tv(e.normative)}</td></tr>` +
    `<tr><th>strong Kleene value</th><td>${tv(e.kleene)}</td></tr>` +
    `<tr><th>testable</th><td>${e.testable}</td></tr>` +
    `<tr><th>fixed by the state</th><td>${e.objective}</td></tr>` +
    `<tr><th>flag</th><td>${e.flag ?? "none"}</td></tr></table>`;
}

await init();
$("seq-theta").addEventListener("input", updateSequential);
$("seq-trials").addEventListener("change", updateSequential);
$("seq-seed").addEventListener("change", updateSequential);
$("seq-sweep").addEventListener("click", runSweep);
$("dom-state").addEventListener("input", updateDomains);
$("dom-atoms").addEventListener("change", updateDomains);
$("ev-stmt").addEventListener("input", updateStatement);
updateSequential();
updateDomains();
