// Build first: see crates/web/README.md. `pkg/` holds the wasm-bindgen output.
import init, { feedbackMac, cooperativeMac, interferenceSweep } from "./pkg/dbbound_web.js";

const $ = (sel, root = document) => root.querySelector(sel);
const num = (fs, name) => parseFloat($(`[name=${name}]`, fs).value);
const logSlider = (fs, name) => {
  const v = 10 ** num(fs, name);
  $(`[name=${name}] + output`, fs).textContent = v.toPrecision(3);
  return v;
};

let active = "nf";

function axes(ctx, w, h, pad, xmax, ymax, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  for (let i = 0; i <= 4; i++) {
    const x = pad + (i / 4) * (w - 2 * pad);
    const y = h - pad - (i / 4) * (h - 2 * pad);
    ctx.fillText(((i / 4) * xmax).toFixed(2), x - 10, h - pad + 16);
    ctx.fillText(((i / 4) * ymax).toFixed(2), 4, y + 4);
  }
  ctx.fillText(xlabel, w / 2, h - 6);
  ctx.save();
  ctx.translate(12, h / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
}

function line(ctx, pts, color, map) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  pts.forEach(([x, y], i) => {
    const [px, py] = map(x, y);
    i ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
  });
  ctx.stroke();
}

const pairs = (flat) => {
  const out = [];
  for (let i = 0; i < flat.length; i += 2) out.push([flat[i], flat[i + 1]]);
  // Close the region down to the R1 axis.
  if (out.length) out.push([out[out.length - 1][0], 0]);
  return out;
};

function drawRegion() {
  const err = $("#err");
  err.textContent = "";
  let c;
  try {
    if (active === "nf") {
      const fs = $("#nf");
      c = feedbackMac(num(fs, "p"), num(fs, "sz"), logSlider(fs, "sfb"));
      $("#refname").textContent = "no feedback";
    } else {
      const fs = $("#uc");
      c = cooperativeMac(num(fs, "p"), num(fs, "sz"), logSlider(fs, "scoop"), num(fs, "h12"), num(fs, "h21"));
      $("#refname").textContent = "no cooperation";
    }
  } catch (e) {
    err.textContent = e.message ?? String(e);
    return;
  }
  const curves = [
    [pairs(c.cutset()), "#c0392b"],
    [pairs(c.db()), "#1f5fbf"],
    [pairs(c.reference()), "#555"],
  ];
  const all = curves.flatMap(([p]) => p);
  const xmax = Math.max(...all.map((p) => p[0])) * 1.05;
  const ymax = Math.max(...all.map((p) => p[1])) * 1.05;
  const cv = $("#region");
  const ctx = cv.getContext("2d");
  const pad = 40;
  axes(ctx, cv.width, cv.height, pad, xmax, ymax, "R1", "R2");
  const map = (x, y) => [pad + (x / xmax) * (cv.width - 2 * pad), cv.height - pad - (y / ymax) * (cv.height - 2 * pad)];
  for (const [p, color] of curves) line(ctx, p, color, map);
  const [db, cs, ref] = c.sums();
  $("#sums").textContent =
    `max sum rate: dependence balance ${db.toFixed(4)}, cut-set ${cs.toFixed(4)}, reference ${ref.toFixed(4)}`;
  c.free();
}

function drawSweep() {
  const fs = $("#ic");
  let v;
  try {
    v = interferenceSweep(num(fs, "cross"), num(fs, "hmax"), 0.05);
  } catch (e) {
    $("#err").textContent = e.message ?? String(e);
    return;
  }
  const rows = [];
  for (let i = 0; i < v.length; i += 3) rows.push([v[i], v[i + 1], v[i + 2]]);
  const xmax = Math.max(rows[rows.length - 1][0], 1e-9);
  const ymax = Math.max(...rows.map((r) => r[2])) * 1.05;
  const cv = $("#sweep");
  const ctx = cv.getContext("2d");
  const pad = 40;
  axes(ctx, cv.width, cv.height, pad, xmax, ymax, "h", "sum rate");
  const map = (x, y) => [pad + (x / xmax) * (cv.width - 2 * pad), cv.height - pad - (y / ymax) * (cv.height - 2 * pad)];
  line(ctx, rows.map((r) => [r[0], r[2]]), "#c0392b", map);
  line(ctx, rows.map((r) => [r[0], r[1]]), "#1f5fbf", map);
}

await init();
for (const id of ["nf", "uc"]) {
  $(`#${id}`).addEventListener("input", () => {
    active = id;
    drawRegion();
  });
}
$("#ic button").addEventListener("click", drawSweep);
drawRegion();
drawSweep();
