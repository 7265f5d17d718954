/**
 * Bounding-volume picking.
 *
 * Every instance is an axis-aligned box: the transform gives its center
 * and full extents. A pick walks all instances with a ray slab test and
 * returns the nearest hit's item id. Outline shells whose outline flag
 * is off are not drawn, so they do not swallow clicks either.
 */

import { FLOATS_PER_TRANSFORM, SceneStore, VALUES_PER_INSTANCE } from "./sceneStore";
import { nodeNameOf } from "./wire";

export interface Ray {
  origin: [number, number, number];
  dir: [number, number, number];
}

export interface PickHit {
  itemId: string;
  distance: number;
}

const OUTLINE_FIELD = 1; // PROP_FIELDS index of outline_enabled

function slabHit(
  origin: number,
  dir: number,
  lo: number,
  hi: number,
  range: [number, number],
): boolean {
  if (dir === 0) {
    return origin >= lo && origin <= hi;
  }
  let t0 = (lo - origin) / dir;
  let t1 = (hi - origin) / dir;
  if (t0 > t1) {
    [t0, t1] = [t1, t0];
  }
  range[0] = Math.max(range[0], t0);
  range[1] = Math.min(range[1], t1);
  return range[0] <= range[1];
}

export function pickItem(
  ray: Ray,
  store: SceneStore,
  visible?: (nodeName: string) => boolean,
): PickHit | null {
  let best: PickHit | null = null;
  for (const group of store.drawGroups()) {
    const outlineMesh = group.meshId.endsWith("-outline");
    for (let slot = 0; slot < group.itemIds.length; slot++) {
      if (outlineMesh && group.values[slot * VALUES_PER_INSTANCE + OUTLINE_FIELD] === 0) {
        continue;
      }
      const itemId = group.itemIds[slot];
      if (visible !== undefined && !visible(nodeNameOf(itemId))) {
        continue;
      }
      const base = slot * FLOATS_PER_TRANSFORM;
      const t = group.transforms;
      const range: [number, number] = [0, Number.POSITIVE_INFINITY];
      let hit = true;
      for (let axis = 0; axis < 3; axis++) {
        const center = t[base + axis];
        const half = t[base + 3 + axis] / 2;
        if (!slabHit(ray.origin[axis], ray.dir[axis], center - half, center + half, range)) {
          hit = false;
          break;
        }
      }
      if (!hit) {
        continue;
      }
      const distance = range[0];
      if (
        best === null ||
        distance < best.distance ||
        (distance === best.distance && itemId < best.itemId)
      ) {
        best = { itemId, distance };
      }
    }
  }
  return best;
}

/** Resolve a pick to the node the hit item belongs to; miss deselects. */
export function pickNode(
  ray: Ray,
  store: SceneStore,
  visible?: (nodeName: string) => boolean,
): string | null {
  const hit = pickItem(ray, store, visible);
  return hit === null ? null : nodeNameOf(hit.itemId);
}
