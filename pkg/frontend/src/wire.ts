/**
 * Wire types for the racktwin service.
 *
 * The server computes every visual encoding; packets carry the final
 * per-instance values and the material templates needed to shade them.
 * This module only decodes and validates shape, it never re-derives a
 * value.
 */

export const PACKET_FULL = "full";
export const PACKET_DELTA = "delta";

export const PROP_FIELDS = [
  "load",
  "outline_enabled",
  "idle_flag",
  "off_flag",
  "alert_flag",
] as const;

export type PropField = (typeof PROP_FIELDS)[number];

export interface InstanceValues {
  load: number;
  outline_enabled: number;
  idle_flag: number;
  off_flag: number;
  alert_flag: number;
}

export type WireTransform = [number, number, number, number, number, number];

export interface WireItem {
  item_id: string;
  mesh_id: string;
  template_id: string;
  instance: InstanceValues;
  transform: WireTransform;
}

export interface WireUpdate {
  item_id: string;
  material_slot: number;
  props: Partial<InstanceValues>;
}

export type WireColor = [number, number, number];

export interface WireTemplate {
  template_id: string;
  shader_kind: string;
  stop0: WireColor | null;
  stop1: WireColor | null;
  base_texture_id: string | null;
  min_w: number | null;
  max_w: number | null;
  normalized_large: number | null;
  outline_color: WireColor | null;
  thickness: number | null;
  expand: number | null;
}

export interface WireAlert {
  node: string;
  rule_id: string;
  value: number;
  timestamp: number;
  severity: string;
}

export interface WireStats {
  batch_count: number;
  potential_draw_calls: number;
  triangle_count: number;
  draw_submissions: number;
  naive_batch_count: number;
  naive_triangle_count: number;
  clamp_count: number;
  error_count: number;
}

export interface BatchSummary {
  mesh_id: string;
  template_id: string;
  instance_count: number;
}

export interface FullPacket {
  kind: typeof PACKET_FULL;
  timestamp: number;
  items: WireItem[];
  batches: BatchSummary[];
  templates: Record<string, WireTemplate>;
  alerts: WireAlert[];
  stats: WireStats;
}

export interface DeltaPacket {
  kind: typeof PACKET_DELTA;
  timestamp: number;
  updates: WireUpdate[];
  alerts: WireAlert[];
  stats: WireStats;
}

export type FramePacket = FullPacket | DeltaPacket;

export interface GpuDetail {
  gpu_index: number;
  utilization: number;
  mem_used_bytes: number;
  mem_capacity_bytes: number;
  power_draw_w: number;
  temp_c: number;
}

export interface NodeDetail {
  node_name: string;
  kind: string;
  state: string;
  cpu_load: number;
  node_temp_c: number;
  alerts: string[];
  user: string | null;
  job_id: string | null;
  gpus: GpuDetail[];
}

export class WireError extends Error {}

export function decodePacket(text: string): FramePacket {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (exc) {
    throw new WireError(`packet is not valid JSON: ${exc}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new WireError("packet must be a JSON object");
  }
  const packet = raw as Record<string, unknown>;
  const kind = packet.kind;
  if (kind !== PACKET_FULL && kind !== PACKET_DELTA) {
    throw new WireError(`unknown packet kind: ${JSON.stringify(kind)}`);
  }
  if (typeof packet.timestamp !== "number") {
    throw new WireError("packet missing timestamp");
  }
  const required = kind === PACKET_FULL ? "items" : "updates";
  if (!Array.isArray(packet[required])) {
    throw new WireError(`${kind} packet missing '${required}'`);
  }
  return packet as unknown as FramePacket;
}

/** Node name carried inside an item id (node/<name>/<element>). */
export function nodeNameOf(itemId: string): string {
  const parts = itemId.split("/");
  if (parts.length < 3 || parts[0] !== "node" || parts[1] === "") {
    throw new WireError(`item id has no node segment: ${JSON.stringify(itemId)}`);
  }
  return parts[1];
}
