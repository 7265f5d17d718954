/**
 * Instanced three.js view of the scene store.
 *
 * One InstancedMesh per draw group, i.e. one instanced draw per (mesh,
 * material template) pair, so the draw-call count equals the server's
 * batch count. Per-instance values go to the GPU exactly as the packets
 * carried them; all metric-to-color logic lives in the material shader
 * driven by the template parameters the server sent.
 */

import * as THREE from "three";

import { DrawGroup, SceneStore, VALUES_PER_INSTANCE } from "./sceneStore";
import { WireTemplate } from "./wire";

export const SHADER_KIND_CODE: Record<string, number> = {
  node_base: 0,
  gpu_bar: 1,
  power_bar: 2,
  outline: 3,
};

const VERTEX = /* glsl */ `
attribute vec4 instanceData;
attribute float instanceAlert;
attribute float instanceVisible;
varying vec4 vData;
varying float vAlert;
varying float vVisible;
varying vec2 vUv;

void main() {
  vData = instanceData;
  vAlert = instanceAlert;
  vVisible = instanceVisible;
  vUv = uv;
  gl_Position = projectionMatrix * modelViewMatrix * instanceMatrix * vec4(position, 1.0);
}
`;

const FRAGMENT = /* glsl */ `
uniform int uKind;
uniform vec3 uStop0;
uniform vec3 uStop1;
uniform float uNormalizedLarge;
uniform vec3 uOutlineColor;
varying vec4 vData;
varying float vAlert;
varying float vVisible;
varying vec2 vUv;

void main() {
  if (vVisible < 0.5) discard;
  float load = vData.x;
  float outlineOn = vData.y;
  float idle = vData.z;
  float off = vData.w;

  if (uKind == 3) {
    if (outlineOn < 0.5) discard;
    gl_FragColor = vec4(uOutlineColor, 1.0);
    return;
  }

  vec3 color = mix(uStop0, uStop1, load);
  if (uKind != 0 && vUv.y > load) discard;
  if (uKind == 2 && load > uNormalizedLarge && vUv.y > uNormalizedLarge) {
    color = vec3(1.0, 0.0, 0.0);
  }
  if (off > 0.5) color = vec3(0.0);
  else if (idle > 0.5) color = vec3(0.5);
  if (uKind == 0 && vAlert > 0.5 && vUv.y > 0.92) {
    color = vec3(1.0, 0.0, 0.0);
  }
  gl_FragColor = vec4(color, 1.0);
}
`;

function unitBox(): THREE.BufferGeometry {
  // every mesh is a unit box scaled per instance; outlines render as
  // slightly larger back-face shells
  return new THREE.BoxGeometry(1, 1, 1);
}

export function materialFor(template: WireTemplate): THREE.ShaderMaterial {
  const kind = SHADER_KIND_CODE[template.shader_kind];
  if (kind === undefined) {
    throw new Error(`unknown shader kind ${template.shader_kind}`);
  }
  const stop0 = template.stop0 ?? [0, 0, 0];
  const stop1 = template.stop1 ?? [0, 0, 0];
  const outline = template.outline_color ?? [0, 0, 0];
  return new THREE.ShaderMaterial({
    vertexShader: VERTEX,
    fragmentShader: FRAGMENT,
    side: kind === SHADER_KIND_CODE.outline ? THREE.BackSide : THREE.FrontSide,
    uniforms: {
      uKind: { value: kind },
      uStop0: { value: new THREE.Vector3(...stop0) },
      uStop1: { value: new THREE.Vector3(...stop1) },
      uNormalizedLarge: { value: template.normalized_large ?? 1.0 },
      uOutlineColor: { value: new THREE.Vector3(...outline) },
    },
  });
}

interface MeshEntry {
  mesh: THREE.InstancedMesh;
  data: THREE.InstancedBufferAttribute;
  alert: THREE.InstancedBufferAttribute;
  visible: THREE.InstancedBufferAttribute;
}

export class InstancedView {
  readonly root = new THREE.Group();
  private entries: MeshEntry[] = [];

  /** One instanced draw per group; camera-facing work stays in three. */
  get drawCallCount(): number {
    return this.entries.length;
  }

  get meshes(): readonly THREE.InstancedMesh[] {
    return this.entries.map((entry) => entry.mesh);
  }

  rebuild(store: SceneStore): void {
    this.root.clear();
    for (const entry of this.entries) {
      entry.mesh.geometry.dispose();
      (entry.mesh.material as THREE.Material).dispose();
    }
    this.entries = [];

    for (const group of store.drawGroups()) {
      const template = store.templates[group.templateId];
      if (template === undefined) {
        throw new Error(`scene references missing template ${group.templateId}`);
      }
      const count = group.itemIds.length;
      const mesh = new THREE.InstancedMesh(unitBox(), materialFor(template), count);
      mesh.name = `${group.meshId}|${group.templateId}`;
      const matrix = new THREE.Matrix4();
      const position = new THREE.Vector3();
      const scale = new THREE.Vector3();
      const rotation = new THREE.Quaternion();
      for (let slot = 0; slot < count; slot++) {
        const base = slot * 6;
        position.set(
          group.transforms[base],
          group.transforms[base + 1],
          group.transforms[base + 2],
        );
        scale.set(
          group.transforms[base + 3],
          group.transforms[base + 4],
          group.transforms[base + 5],
        );
        matrix.compose(position, rotation, scale);
        mesh.setMatrixAt(slot, matrix);
      }

      const data = new THREE.InstancedBufferAttribute(new Float32Array(count * 4), 4);
      const alert = new THREE.InstancedBufferAttribute(new Float32Array(count), 1);
      const visible = new THREE.InstancedBufferAttribute(new Float32Array(count).fill(1), 1);
      writeInstanceRange(group, data, alert, 0, count - 1);
      mesh.geometry.setAttribute("instanceData", data);
      mesh.geometry.setAttribute("instanceAlert", alert);
      mesh.geometry.setAttribute("instanceVisible", visible);

      this.entries.push({ mesh, data, alert, visible });
      this.root.add(mesh);
    }
  }

  /** Re-upload only the instance regions a delta touched. */
  applyDirty(store: SceneStore): number {
    const ranges = store.takeDirty();
    const groups = store.drawGroups();
    for (const range of ranges) {
      const entry = this.entries[range.group];
      writeInstanceRange(groups[range.group], entry.data, entry.alert, range.first, range.last);
      markRange(entry.data, range.first * 4, (range.last - range.first + 1) * 4);
      markRange(entry.alert, range.first, range.last - range.first + 1);
    }
    return ranges.length;
  }

  /** Focus isolation: per-instance visibility from a node predicate. */
  applyVisibility(store: SceneStore, isNodeVisible: (nodeName: string) => boolean): void {
    const groups = store.drawGroups();
    groups.forEach((group, g) => {
      const entry = this.entries[g];
      group.itemIds.forEach((itemId, slot) => {
        const name = itemId.split("/")[1];
        entry.visible.array[slot] = isNodeVisible(name) ? 1 : 0;
      });
      entry.visible.needsUpdate = true;
    });
  }
}

function writeInstanceRange(
  group: DrawGroup,
  data: THREE.InstancedBufferAttribute,
  alert: THREE.InstancedBufferAttribute,
  first: number,
  last: number,
): void {
  const dataArray = data.array as Float32Array;
  const alertArray = alert.array as Float32Array;
  for (let slot = first; slot <= last; slot++) {
    const src = slot * VALUES_PER_INSTANCE;
    dataArray[slot * 4] = group.values[src];
    dataArray[slot * 4 + 1] = group.values[src + 1];
    dataArray[slot * 4 + 2] = group.values[src + 2];
    dataArray[slot * 4 + 3] = group.values[src + 3];
    alertArray[slot] = group.values[src + 4];
  }
}

function markRange(attr: THREE.InstancedBufferAttribute, start: number, count: number): void {
  attr.needsUpdate = true;
  if (typeof attr.addUpdateRange === "function") {
    attr.addUpdateRange(start, count);
  }
}
