import { ApiClient } from "./api.js";
import {
  SessionState,
  createSession,
  inspectNode,
  layoutTickSession,
  runPluginPanel,
  setEndpoint,
  setQuery,
  submitQuery,
  toggleClassVisibility,
} from "./session.js";

/**
 * Recordable user events.  The session is a pure function of
 * (server responses, event sequence, layout seed), so replaying a log
 * against the same server responses reproduces the state exactly.
 */
export type UiEvent =
  | { type: "set_endpoint"; url: string }
  | { type: "set_query"; text: string }
  | { type: "submit" }
  | { type: "toggle_class"; classId: string }
  | { type: "inspect"; nodeId: number }
  | { type: "run_plugin"; name: string; params: Record<string, unknown> }
  | { type: "layout_tick" };

export async function applyEvent(
  state: SessionState,
  api: ApiClient,
  event: UiEvent,
): Promise<SessionState> {
  switch (event.type) {
    case "set_endpoint":
      return setEndpoint(state, event.url);
    case "set_query":
      return setQuery(state, event.text);
    case "submit":
      return submitQuery(state, api);
    case "toggle_class":
      return toggleClassVisibility(state, event.classId);
    case "inspect":
      return inspectNode(state, api, event.nodeId);
    case "run_plugin":
      return runPluginPanel(state, api, event.name, event.params);
    case "layout_tick":
      return layoutTickSession(state);
  }
}

/** Events are applied strictly in order: at most one in-flight request. */
export async function replaySession(
  api: ApiClient,
  layoutSeed: number,
  events: UiEvent[],
): Promise<SessionState> {
  let state = await createSession(api, layoutSeed);
  for (const event of events) {
    state = await applyEvent(state, api, event);
  }
  return state;
}
