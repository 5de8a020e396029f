import { ApiClient, ApiError } from "./api";
import type { EdgeKey, GraphPayload, Radius, ViewState } from "./types";

export type Listener = (state: ViewState) => void;
export type ToastFn = (message: string) => void;

const INITIAL: ViewState = {
  focus: null,
  radius: 1,
  visibleGraph: null,
  selectedEdge: null,
  searchQuery: "",
};

/**
 * Holds the explorer's single source of truth. The visible graph is only
 * ever replaced wholesale by a successful API payload; a failed or stale
 * response leaves the state untouched. At most one ego request is live at
 * a time: later requests win over earlier ones that resolve late.
 */
export class ExplorerStore {
  private state: ViewState = INITIAL;
  private listeners: Listener[] = [];
  private requestSeq = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly toast: ToastFn = () => {},
  ) {}

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private commit(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Replace the view with the whole-corpus snapshot. */
  async loadOverview(): Promise<void> {
    const seq = ++this.requestSeq;
    let payload: GraphPayload;
    try {
      payload = await this.api.fullGraph();
    } catch (err) {
      this.toast(describe(err, "overview unavailable"));
      return;
    }
    if (seq !== this.requestSeq) return; // a newer navigation superseded us
    this.commit({ focus: null, visibleGraph: payload, selectedEdge: null });
  }

  /**
   * Focus a company: fetch its ego network and show exactly that payload.
   * The radius persists across focus changes unless explicitly given.
   */
  async expandEgo(companyId: string, radius?: Radius): Promise<void> {
    const effective = radius ?? this.state.radius;
    const seq = ++this.requestSeq;
    let payload: GraphPayload;
    try {
      payload = await this.api.ego(companyId, effective);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.toast(`no company ${companyId} in the graph`);
        return; // state unchanged
      }
      this.toast(describe(err, "ego request failed"));
      return;
    }
    if (seq !== this.requestSeq) return; // stale response: drop it
    this.commit({
      focus: companyId,
      radius: effective,
      visibleGraph: payload,
      selectedEdge: null,
    });
  }

  /** Change the hop radius; refetches when a company is focused. */
  async setRadius(radius: Radius): Promise<void> {
    if (this.state.focus === null) {
      this.commit({ radius });
      return;
    }
    await this.expandEgo(this.state.focus, radius);
  }

  selectEdge(key: EdgeKey): void {
    this.commit({ selectedEdge: key });
  }

  clearEdge(): void {
    this.commit({ selectedEdge: null });
  }

  setSearchQuery(query: string): void {
    this.commit({ searchQuery: query });
  }
}

function describe(err: unknown, fallback: string): string {
  return err instanceof Error && err.message ? err.message : fallback;
}
