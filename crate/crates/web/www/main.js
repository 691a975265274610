import init, { presets, render_map, angular_profile, motion_profile } from "./pkg/jamfield_web.js";

const $ = (id) => document.getElementById(id);
const curves = { static: null, motion: null };

function status(msg) {
  $("status").textContent = msg || "";
}

function guarded(fn) {
  return () => {
    status("working...");
    // let the status paint before the blocking call
    setTimeout(() => {
      try {
        fn();
        status("");
      } catch (e) {
        status(String(e.message || e));
      }
    }, 10);
  };
}

function drawMap() {
  const img = render_map($("preset").value, +$("sources").value, +$("yaw").value, +$("half").value, +$("cell").value);
  const n = img.size;
  const off = new OffscreenCanvas(n, n);
  off.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(img.pixels), n, n), 0, 0);
  const ctx = $("map").getContext("2d");
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, $("map").width, $("map").height);
  img.free();
}

function std(v) {
  const m = v.reduce((a, b) => a + b, 0) / v.length;
  return Math.sqrt(v.reduce((a, b) => a + (b - m) ** 2, 0) / v.length);
}

function drawProfiles() {
  const c = $("profile");
  const ctx = c.getContext("2d");
  const w = c.width, h = c.height, pad = 35;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ccc";
  ctx.fillStyle = "#444";
  for (let db = 0; db >= -40; db -= 10) {
    const y = pad / 2 + (-db / 40) * (h - pad * 1.5);
    ctx.beginPath(); ctx.moveTo(pad, y); ctx.lineTo(w - 5, y); ctx.stroke();
    ctx.fillText(`${db}`, 5, y + 4);
  }
  for (let a = 0; a <= 180; a += 45) {
    const x = pad + (a / 180) * (w - pad - 5);
    ctx.fillText(`${a}°`, x - 8, h - 5);
  }
  const legend = [];
  for (const [name, color] of [["static", "#1f4e9c"], ["motion", "#d2691e"]]) {
    const v = curves[name];
    if (!v) continue;
    ctx.strokeStyle = color;
    ctx.beginPath();
    v.forEach((db, i) => {
      const x = pad + (i / (v.length - 1)) * (w - pad - 5);
      const y = pad / 2 + (Math.min(40, -db) / 40) * (h - pad * 1.5);
      i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
    });
    ctx.stroke();
    legend.push(`<span style="color:${color}">${name}</span>: std ${std(v).toFixed(2)} dB`);
  }
  $("legend").innerHTML = legend.join(" &nbsp; ");
}

function drawStatic() {
  curves.static = Array.from(angular_profile($("preset").value, +$("sources").value, +$("radius").value, +$("step").value));
  drawProfiles();
}

function drawMotion() {
  curves.motion = Array.from(motion_profile(
    $("preset").value, +$("sources").value, +$("range").value, +$("seconds").value,
    BigInt($("seed").value), +$("radius").value, +$("step").value));
  drawProfiles();
}

await init();
for (const p of presets()) {
  const o = document.createElement("option");
  o.value = o.textContent = p;
  $("preset").append(o);
}
$("preset").value = "bracelet_24";
$("yaw").oninput = () => { $("yawval").textContent = $("yaw").value; };
$("yaw").onchange = guarded(drawMap);
$("draw-map").onclick = guarded(drawMap);
$("draw-static").onclick = guarded(drawStatic);
$("draw-motion").onclick = guarded(drawMotion);
guarded(() => { drawMap(); drawStatic(); })();
