/**
 * HTTP and WebSocket access to a running racktwin service.
 *
 * The WebSocket constructor is injected so the same client runs in the
 * browser (global WebSocket) and under node test runners (the ws
 * package).
 */

import {
  FramePacket,
  FullPacket,
  NodeDetail,
  WireAlert,
  WireStats,
  decodePacket,
} from "./wire";

export class HttpError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface FocusQuery {
  node_glob?: string;
  user?: string;
  job_id?: string;
  alert?: string;
}

export interface NodesResponse {
  timestamp: number;
  nodes: string[];
}

export interface NodeDetailResponse {
  timestamp: number;
  node: NodeDetail;
}

export interface AlertsResponse {
  timestamp: number;
  alerts: WireAlert[];
}

export type StatsResponse = WireStats & { timestamp: number; report: string };

export class TwinClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async nodes(): Promise<NodesResponse> {
    return this.request("/nodes");
  }

  async nodeDetail(name: string): Promise<NodeDetailResponse> {
    return this.request(`/nodes/${encodeURIComponent(name)}`);
  }

  async frames(t0: number, t1: number): Promise<FullPacket[]> {
    const body = await this.request<{ frames: FullPacket[] }>(
      `/frames?t0=${t0}&t1=${t1}`,
    );
    return body.frames;
  }

  async alerts(): Promise<AlertsResponse> {
    return this.request("/alerts");
  }

  async stats(): Promise<StatsResponse> {
    return this.request("/stats");
  }

  async sceneAt(t?: number): Promise<FullPacket> {
    const path = t === undefined ? "/scene" : `/scene?t=${t}`;
    return this.request(path);
  }

  async focus(query: FocusQuery): Promise<string[]> {
    const body = await this.request<{ nodes: string[] }>("/focus", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(query),
    });
    return body.nodes;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      const text = await response.text();
      throw new HttpError(response.status, `${path}: ${response.status} ${text}`);
    }
    return (await response.json()) as T;
  }
}

/** The subset of the WebSocket API the live stream needs; handler
 * parameter types stay open so both the browser socket and the ws
 * package satisfy it. */
export interface WebSocketLike {
  onmessage: ((event: any) => void) | null;
  onclose: ((event: any) => void) | null;
  onerror: ((event: any) => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => WebSocketLike;

export interface LiveSocketHandlers {
  onPacket: (packet: FramePacket) => void;
  onClose?: () => void;
  onError?: (error: Error) => void;
}

/**
 * Live frame subscription. The server sends a full packet first, then
 * one packet per tick; each arrives as one text message.
 */
export class LiveSocket {
  private socket: WebSocketLike;
  private closed = false;

  constructor(url: string, handlers: LiveSocketHandlers, factory: SocketFactory) {
    this.socket = factory(url);
    this.socket.onmessage = (event) => {
      try {
        handlers.onPacket(decodePacket(String(event.data)));
      } catch (exc) {
        handlers.onError?.(exc instanceof Error ? exc : new Error(String(exc)));
      }
    };
    this.socket.onclose = () => {
      if (!this.closed) {
        handlers.onClose?.();
      }
    };
    this.socket.onerror = (event) => {
      handlers.onError?.(new Error(`live socket error: ${event}`));
    };
  }

  close(): void {
    this.closed = true;
    this.socket.close();
  }
}

/** ws://host:port/live derived from the HTTP base URL. */
export function liveUrl(baseUrl: string): string {
  return baseUrl.replace(/^http/, "ws") + "/live";
}
