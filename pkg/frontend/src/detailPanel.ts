/**
 * Node detail panel model.
 *
 * The panel stores the node-detail response verbatim and renders it to
 * text lines without rounding or recomputing anything, so its content
 * always equals what the endpoint returned.
 */

import { NodeDetailResponse } from "./client";
import { NodeDetail } from "./wire";

export class DetailPanel {
  private current: NodeDetailResponse | null = null;

  open(detail: NodeDetailResponse): void {
    this.current = detail;
  }

  clear(): void {
    this.current = null;
  }

  get isOpen(): boolean {
    return this.current !== null;
  }

  get node(): NodeDetail | null {
    return this.current === null ? null : this.current.node;
  }

  get timestamp(): number | null {
    return this.current === null ? null : this.current.timestamp;
  }

  renderLines(): string[] {
    if (this.current === null) {
      return [];
    }
    const node = this.current.node;
    const lines = [
      `${node.node_name}  ${node.kind}  ${node.state}`,
      `cpu_load ${node.cpu_load}  node_temp_c ${node.node_temp_c}`,
      `user ${node.user ?? "-"}  job ${node.job_id ?? "-"}`,
    ];
    if (node.alerts.length > 0) {
      lines.push(`alerts ${node.alerts.join(", ")}`);
    }
    for (const gpu of node.gpus) {
      lines.push(
        `gpu${gpu.gpu_index}  util ${gpu.utilization}` +
          `  mem ${gpu.mem_used_bytes}/${gpu.mem_capacity_bytes}` +
          `  power_w ${gpu.power_draw_w}  temp_c ${gpu.temp_c}`,
      );
    }
    return lines;
  }
}
