// Demo page driver. Requires the wasm package built into ./pkg:
//   wasm-pack build crates/eoptd-wasm --target web --out-dir www/pkg
import init, {
  design_summary,
  extremal_surface,
  lambda_min_value,
  rotatable_curve,
} from "./pkg/eoptd_wasm.js";

const $ = (id) => document.getElementById(id);
const GRID = 241;

// perceptual-ish two-stop ramp: deep blue -> warm yellow
function color(t) {
  const stops = [
    [13, 8, 135], [84, 2, 163], [139, 10, 165], [185, 50, 137],
    [219, 92, 104], [244, 136, 73], [254, 188, 43], [240, 249, 33],
  ];
  const x = Math.min(Math.max(t, 0), 1) * (stops.length - 1);
  const i = Math.min(Math.floor(x), stops.length - 2);
  const f = x - i;
  return stops[i].map((c, j) => Math.round(c + f * (stops[i + 1][j] - c)));
}

function drawSurface(space) {
  const canvas = $("surface");
  const ctx = canvas.getContext("2d");
  const values = extremal_surface(space, GRID);
  const lambda = lambda_min_value(space, 2);
  const img = ctx.createImageData(GRID, GRID);
  for (let i = 0; i < values.length; i++) {
    const v = values[i];
    const px = i * 4;
    if (Number.isNaN(v)) {
      img.data[px + 3] = 0;
      continue;
    }
    // d ranges over [λ(1 - 2/k·…), λ]; normalize by λ for the ramp
    const [r, g, b] = color(v / lambda);
    img.data[px] = r;
    img.data[px + 1] = g;
    img.data[px + 2] = b;
    img.data[px + 3] = 255;
  }
  // scale the GRID×GRID field onto the canvas
  const off = new OffscreenCanvas(GRID, GRID);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);

  // support points of the k=2 optimum, area proportional to weight
  const summary = JSON.parse(design_summary(space, 2));
  const toPx = (c) => ((c + 1) / 2) * canvas.width;
  for (const p of summary.points ?? []) {
    ctx.beginPath();
    ctx.arc(toPx(p.x), canvas.height - toPx(p.y), 26 * Math.sqrt(p.w), 0, 2 * Math.PI);
    ctx.fillStyle = "rgba(255,255,255,.85)";
    ctx.fill();
    ctx.strokeStyle = "#222";
    ctx.stroke();
  }
}

function drawCurve() {
  const canvas = $("gap");
  const ctx = canvas.getContext("2d");
  const data = JSON.parse(rotatable_curve(24));
  const { k, ratio } = data;
  const pad = 34;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const x = (kk) => pad + ((kk - k[0]) / (k[k.length - 1] - k[0])) * w;
  const lo = 0.8, hi = 1.0;
  const y = (r) => pad + (1 - (r - lo) / (hi - lo)) * h;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#8888";
  ctx.fillStyle = "#888";
  ctx.font = "11px system-ui";
  for (const r of [0.8, 0.85, 0.9, 0.95, 1.0]) {
    ctx.beginPath();
    ctx.moveTo(pad, y(r));
    ctx.lineTo(pad + w, y(r));
    ctx.stroke();
    ctx.fillText(r.toFixed(2), 4, y(r) + 4);
  }
  for (const kk of [2, 6, 10, 14, 18, 22]) {
    ctx.fillText(String(kk), x(kk) - 4, canvas.height - 8);
  }
  ctx.fillText("k →", pad + w - 18, canvas.height - 8);

  ctx.strokeStyle = "#e0733d";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ratio.forEach((r, i) => (i === 0 ? ctx.moveTo(x(k[i]), y(r)) : ctx.lineTo(x(k[i]), y(r))));
  ctx.stroke();
  ctx.lineWidth = 1;
  ctx.fillStyle = "#e0733d";
  ratio.forEach((r, i) => {
    ctx.beginPath();
    ctx.arc(x(k[i]), y(r), 2.5, 0, 2 * Math.PI);
    ctx.fill();
  });
}

function refreshSummary() {
  const space = $("space").value;
  const k = Number($("k").value);
  $("kval").textContent = k;
  const summary = JSON.parse(design_summary(space, k));
  if (summary.error) {
    $("error").textContent = summary.error;
    return;
  }
  $("error").textContent = "";
  $("lambda").textContent = summary.lambda_min;
  $("mult").textContent = `(multiplicity ${summary.multiplicity}, m = ${summary.m})`;
  $("support").textContent = summary.support_points;
  const body = $("sets").querySelector("tbody");
  body.innerHTML = "";
  for (const s of summary.sets) {
    const row = document.createElement("tr");
    row.innerHTML = `<td>${s.set}</td><td>${s.points}</td><td>${s.mass}</td>`;
    body.appendChild(row);
  }
}

await init();
$("space").addEventListener("change", () => {
  refreshSummary();
  drawSurface($("space").value);
});
$("k").addEventListener("input", refreshSummary);
refreshSummary();
drawSurface($("space").value);
drawCurve();
