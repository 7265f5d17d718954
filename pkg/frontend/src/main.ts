/**
 * Browser entry point.
 *
 * Wires the live socket, the scene store, the instanced renderer, and
 * the pointer/scrubber/search controls together. Everything testable
 * lives in the imported modules; this file is orchestration only.
 */

import * as THREE from "three";

import { LiveSocket, TwinClient, liveUrl } from "./client";
import { DetailPanel } from "./detailPanel";
import { pickNode } from "./picking";
import { InstancedView } from "./render3d";
import { SceneStore, StructuralError } from "./sceneStore";
import { ViewState } from "./viewState";
import { FramePacket, PACKET_FULL } from "./wire";

const BASE_URL = `${location.protocol}//${location.hostname}:8787`;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing #${id}`);
  }
  return found as T;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("view");
  const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
  const scene = new THREE.Scene();
  scene.background = new THREE.Color(0x10141c);
  const camera = new THREE.PerspectiveCamera(50, 1, 0.1, 500);
  camera.position.set(14, 8, -18);
  camera.lookAt(10, 4, 10);

  const store = new SceneStore();
  const view = new InstancedView();
  scene.add(view.root);

  const client = new TwinClient(BASE_URL);
  const viewState = new ViewState();
  const panel = new DetailPanel();
  const panelBox = el<HTMLPreElement>("panel");
  const statusBox = el<HTMLSpanElement>("status");

  const resize = () => {
    const w = canvas.clientWidth, h = canvas.clientHeight;
    renderer.setSize(w, h, false);
    camera.aspect = w / h;
    camera.updateProjectionMatrix();
  };
  window.addEventListener("resize", resize);

  const onPacket = (packet: FramePacket) => {
    if (!viewState.shouldApplyLive()) {
      return;
    }
    try {
      store.apply(packet);
    } catch (exc) {
      if (exc instanceof StructuralError) {
        // a stale delta raced a structural change; the next full packet
        // will resynchronize
        return;
      }
      throw exc;
    }
    if (packet.kind === PACKET_FULL) {
      view.rebuild(store);
      view.applyVisibility(store, (name) => viewState.isNodeVisible(name));
    } else {
      view.applyDirty(store);
    }
    statusBox.textContent = `live  t=${store.timestamp}  draws=${view.drawCallCount}`;
  };

  new LiveSocket(
    liveUrl(BASE_URL),
    {
      onPacket,
      onClose: () => {
        statusBox.textContent = "disconnected";
      },
    },
    (url) => new WebSocket(url),
  );

  canvas.addEventListener("pointerdown", async (event) => {
    const rect = canvas.getBoundingClientRect();
    const ndc = new THREE.Vector2(
      ((event.clientX - rect.left) / rect.width) * 2 - 1,
      -(((event.clientY - rect.top) / rect.height) * 2 - 1),
    );
    const caster = new THREE.Raycaster();
    caster.setFromCamera(ndc, camera);
    const name = pickNode(
      {
        origin: caster.ray.origin.toArray() as [number, number, number],
        dir: caster.ray.direction.toArray() as [number, number, number],
      },
      store,
      (node) => viewState.isNodeVisible(node),
    );
    viewState.select(name);
    if (name === null) {
      panel.clear();
      panelBox.textContent = "";
      return;
    }
    panel.open(await client.nodeDetail(name));
    panelBox.textContent = panel.renderLines().join("\n");
  });

  const search = el<HTMLInputElement>("search");
  search.addEventListener("change", async () => {
    const text = search.value.trim();
    if (text === "") {
      viewState.clearFocus();
    } else {
      const names = await client.focus(
        text.includes("=")
          ? { user: text.split("=", 2)[1] }
          : { node_glob: text },
      );
      viewState.setFocus(names);
      if (viewState.focusEmpty) {
        statusBox.textContent = "no matches";
      }
    }
    view.applyVisibility(store, (name) => viewState.isNodeVisible(name));
  });

  const scrub = el<HTMLInputElement>("scrub");
  scrub.addEventListener("input", async () => {
    const frames = await client.frames(0, Number.MAX_SAFE_INTEGER);
    if (frames.length === 0) {
      return;
    }
    const first = frames[0].timestamp;
    const last = frames[frames.length - 1].timestamp;
    const target = first + ((last - first) * Number(scrub.value)) / 100;
    const result = viewState.scrubTo(target, first, last);
    const packet = await client.sceneAt(result.t);
    store.apply(packet);
    view.rebuild(store);
    view.applyVisibility(store, (name) => viewState.isNodeVisible(name));
    statusBox.textContent = `replay t=${result.t}${result.clamped ? " (clamped)" : ""}`;
  });

  el<HTMLButtonElement>("live").addEventListener("click", () => {
    viewState.backToLive();
  });

  resize();
  renderer.setAnimationLoop(() => renderer.render(scene, camera));
}

main();
