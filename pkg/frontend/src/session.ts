import { ApiClient, ApiError } from "./api.js";
import {
  LayoutState,
  initLayout,
  layoutTick,
  mergeLayout,
} from "./layout.js";
import {
  ConceptDetail,
  SelectResults,
  ViewEdge,
  ViewGraph,
  ViewNode,
} from "./types.js";

/** One console interaction, recorded append-only. */
export interface HistoryEntry {
  query: string;
  kind: "select" | "construct" | "plugin";
  status: "ok" | "failed";
  note: string;
}

export interface Selection {
  nodeId: number;
  /** null means the node vanished server-side: show a refresh prompt. */
  detail: ConceptDetail | null;
}

export interface SessionState {
  graphId: string;
  endpointUrl: string;
  queryText: string;
  history: HistoryEntry[];
  view: ViewGraph;
  hiddenClasses: Set<string>;
  selection: Selection | null;
  layout: LayoutState;
  preview: SelectResults | null;
  errorBanner: string | null;
  toast: string | null;
  fieldErrors: Record<string, string>;
}

const EMPTY_VIEW: ViewGraph = { nodes: [], edges: [], classes: [] };

export async function createSession(
  api: ApiClient,
  layoutSeed: number,
): Promise<SessionState> {
  const graphId = await api.createGraph();
  const view = await api.getView(graphId);
  return {
    graphId,
    endpointUrl: "",
    queryText: "",
    history: [],
    view,
    hiddenClasses: new Set(),
    selection: null,
    layout: initLayout(view, layoutSeed),
    preview: null,
    errorBanner: null,
    toast: null,
    fieldErrors: {},
  };
}

export function setEndpoint(state: SessionState, url: string): SessionState {
  return { ...state, endpointUrl: url };
}

export function setQuery(state: SessionState, text: string): SessionState {
  return { ...state, queryText: text };
}

/** SELECT previews, CONSTRUCT imports; anything else is a console error. */
export function classifyQuery(query: string): "select" | "construct" | null {
  const stripped = query
    .replace(/^\s*(PREFIX\s+\S+\s+<[^>]*>\s*)*/i, "")
    .trimStart();
  if (/^select\b/i.test(stripped)) {
    return "select";
  }
  if (/^construct\b/i.test(stripped)) {
    return "construct";
  }
  return null;
}

export function canSubmit(state: SessionState): boolean {
  return state.queryText.trim().length > 0;
}

export async function submitQuery(
  state: SessionState,
  api: ApiClient,
): Promise<SessionState> {
  if (!canSubmit(state)) {
    return state; // submit disabled: no request leaves the client
  }
  const query = state.queryText;
  const kind = classifyQuery(query);
  if (kind === null) {
    return {
      ...state,
      errorBanner: "only SELECT and CONSTRUCT queries are supported",
    };
  }
  try {
    if (kind === "select") {
      const preview = await api.selectPreview(state.endpointUrl, query);
      return {
        ...state,
        preview,
        errorBanner: null,
        history: [
          ...state.history,
          {
            query,
            kind,
            status: "ok",
            note: `${preview.results.bindings.length} rows`,
          },
        ],
      };
    }
    const report = await api.importSparql(
      state.graphId,
      state.endpointUrl,
      query,
      state.endpointUrl || "console",
    );
    const view = await api.getView(state.graphId);
    return {
      ...state,
      view,
      layout: mergeLayout(state.layout, view),
      selection: refreshSelection(state.selection, view),
      errorBanner: null,
      history: [
        ...state.history,
        {
          query,
          kind,
          status: "ok",
          note: `+${report.concepts_created} concepts, +${report.relations_created} relations`,
        },
      ],
    };
  } catch (err) {
    const message = err instanceof ApiError ? `HTTP ${err.status}` : String(err);
    return {
      ...state,
      errorBanner: message,
      history: [
        ...state.history,
        { query, kind, status: "failed", note: message },
      ],
    };
  }
}

function refreshSelection(
  selection: Selection | null,
  view: ViewGraph,
): Selection | null {
  if (selection === null) {
    return null;
  }
  if (view.nodes.some((n) => n.id === selection.nodeId)) {
    return selection;
  }
  return { nodeId: selection.nodeId, detail: null };
}

/** Purely presentational: hides nodes of a class, server graph untouched. */
export function toggleClassVisibility(
  state: SessionState,
  classId: string,
): SessionState {
  const hiddenClasses = new Set(state.hiddenClasses);
  if (hiddenClasses.has(classId)) {
    hiddenClasses.delete(classId);
  } else {
    hiddenClasses.add(classId);
  }
  return { ...state, hiddenClasses };
}

export function visibleNodes(state: SessionState): ViewNode[] {
  return state.view.nodes.filter((n) => !state.hiddenClasses.has(n.class));
}

export function visibleEdges(state: SessionState): ViewEdge[] {
  const visible = new Set(visibleNodes(state).map((n) => n.id));
  return state.view.edges.filter(
    (e) => visible.has(e.source) && visible.has(e.target),
  );
}

export async function inspectNode(
  state: SessionState,
  api: ApiClient,
  nodeId: number,
): Promise<SessionState> {
  try {
    const detail = await api.getConcept(state.graphId, nodeId);
    return { ...state, selection: { nodeId, detail } };
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      return { ...state, selection: { nodeId, detail: null } };
    }
    throw err;
  }
}

export async function runPluginPanel(
  state: SessionState,
  api: ApiClient,
  name: string,
  params: Record<string, unknown>,
): Promise<SessionState> {
  try {
    const result = await api.runPlugin(state.graphId, name, params);
    const view = await api.getView(state.graphId);
    const metrics = Object.entries(result.metrics)
      .sort(([a], [b]) => (a < b ? -1 : 1))
      .map(([k, v]) => `${k}=${v}`)
      .join(" ");
    return {
      ...state,
      view,
      layout: mergeLayout(state.layout, view),
      selection: refreshSelection(state.selection, view),
      toast: `${name}: ${metrics}`,
      fieldErrors: {},
      history: [
        ...state.history,
        { query: name, kind: "plugin", status: "ok", note: metrics },
      ],
    };
  } catch (err) {
    if (err instanceof ApiError && err.status === 400) {
      // violations render next to the offending form field
      const fieldErrors: Record<string, string> = {};
      const detail = err.detail as { detail?: unknown };
      const violations = Array.isArray(detail?.detail) ? detail.detail : [];
      for (const v of violations) {
        const text = String(v);
        for (const key of Object.keys(params)) {
          if (text.includes(key)) {
            fieldErrors[key] = text;
          }
        }
      }
      return { ...state, fieldErrors };
    }
    throw err;
  }
}

export function layoutTickSession(state: SessionState): SessionState {
  return { ...state, layout: layoutTick(state.layout, state.view) };
}

/**
 * Canonical JSON snapshot of the whole session (maps and sets flattened
 * in sorted order) — two states are equal iff their snapshots match.
 */
export function snapshot(state: SessionState): string {
  return JSON.stringify({
    graphId: state.graphId,
    endpointUrl: state.endpointUrl,
    queryText: state.queryText,
    history: state.history,
    view: state.view,
    hiddenClasses: [...state.hiddenClasses].sort(),
    selection: state.selection,
    layout: {
      seed: state.layout.seed,
      positions: [...state.layout.positions.entries()]
        .sort(([a], [b]) => a - b)
        .map(([id, p]) => [id, p.x, p.y]),
    },
    preview: state.preview,
    errorBanner: state.errorBanner,
    toast: state.toast,
    fieldErrors: state.fieldErrors,
  });
}
