/**
 * UI mode, scrubber, focus, and selection state.
 *
 * Replay mode freezes live packet application; the scrub time is always
 * clamped into the available history range so replay never references a
 * frame the server cannot serve.
 */

export type ViewMode = "live" | "replay";

export interface ScrubResult {
  t: number;
  clamped: boolean;
}

export class ViewState {
  mode: ViewMode = "live";
  scrubTime: number | null = null;
  selectedNode: string | null = null;
  alertPanelOpen = false;

  private focusSet: Set<string> | null = null;

  /**
   * Enter replay mode at time t, clamped into [first, last]. The
   * clamped flag drives the out-of-range indicator.
   */
  scrubTo(t: number, first: number, last: number): ScrubResult {
    if (first > last) {
      throw new RangeError(`empty history range [${first}, ${last}]`);
    }
    const clamped = t < first ? first : t > last ? last : t;
    this.mode = "replay";
    this.scrubTime = clamped;
    return { t: clamped, clamped: clamped !== t };
  }

  backToLive(): void {
    this.mode = "live";
    this.scrubTime = null;
  }

  /** Live packets are dropped while the operator inspects history. */
  shouldApplyLive(): boolean {
    return this.mode === "live";
  }

  select(nodeName: string | null): void {
    this.selectedNode = nodeName;
  }

  setFocus(names: string[] | null): void {
    this.focusSet = names === null ? null : new Set(names);
  }

  clearFocus(): void {
    this.focusSet = null;
  }

  get focusActive(): boolean {
    return this.focusSet !== null;
  }

  get focusEmpty(): boolean {
    return this.focusSet !== null && this.focusSet.size === 0;
  }

  isNodeVisible(nodeName: string): boolean {
    return this.focusSet === null || this.focusSet.has(nodeName);
  }
}
