import { ViewGraph } from "./types.js";

/**
 * Deterministic force-directed layout: all-pairs repulsion, one spring per
 * edge, velocity damping.  Everything is seeded, so the same (view, seed)
 * always produces the same positions — the session replay guarantee
 * depends on this.
 */

export interface Point {
  x: number;
  y: number;
}

export interface LayoutState {
  seed: number;
  positions: Map<number, Point>;
  velocities: Map<number, Point>;
}

const REPULSION = 800;
const SPRING = 0.05;
const REST_LENGTH = 80;
const DAMPING = 0.85;
const STEP = 0.1;

/** mulberry32 — tiny seedable PRNG, plenty for initial placement. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function initLayout(view: ViewGraph, seed: number): LayoutState {
  const layout: LayoutState = {
    seed,
    positions: new Map(),
    velocities: new Map(),
  };
  const rand = mulberry32(seed);
  for (const node of view.nodes) {
    layout.positions.set(node.id, {
      x: rand() * 600 - 300,
      y: rand() * 600 - 300,
    });
    layout.velocities.set(node.id, { x: 0, y: 0 });
  }
  return layout;
}

/**
 * Bring the layout up to date with a merged view: existing nodes keep
 * their positions, new nodes enter near their first neighbor (or at a
 * seeded random spot if isolated).  Positions of removed nodes are
 * dropped.
 */
export function mergeLayout(layout: LayoutState, view: ViewGraph): LayoutState {
  const positions = new Map(layout.positions);
  const velocities = new Map(layout.velocities);
  const present = new Set(view.nodes.map((n) => n.id));
  for (const id of positions.keys()) {
    if (!present.has(id)) {
      positions.delete(id);
      velocities.delete(id);
    }
  }
  // derive per-node entry randomness from (seed, node id) so the result
  // does not depend on insertion order
  for (const node of view.nodes) {
    if (positions.has(node.id)) {
      continue;
    }
    const rand = mulberry32(layout.seed ^ (node.id * 2654435761));
    const edge = view.edges.find(
      (e) =>
        (e.source === node.id && positions.has(e.target)) ||
        (e.target === node.id && positions.has(e.source)),
    );
    if (edge) {
      const anchorId = edge.source === node.id ? edge.target : edge.source;
      const anchor = positions.get(anchorId)!;
      positions.set(node.id, {
        x: anchor.x + (rand() - 0.5) * 2 * REST_LENGTH,
        y: anchor.y + (rand() - 0.5) * 2 * REST_LENGTH,
      });
    } else {
      positions.set(node.id, { x: rand() * 600 - 300, y: rand() * 600 - 300 });
    }
    velocities.set(node.id, { x: 0, y: 0 });
  }
  return { seed: layout.seed, positions, velocities };
}

export function kineticEnergy(layout: LayoutState): number {
  let total = 0;
  for (const v of layout.velocities.values()) {
    total += v.x * v.x + v.y * v.y;
  }
  return total;
}

/** One simulation step; pure — returns a new LayoutState. */
export function layoutTick(layout: LayoutState, view: ViewGraph): LayoutState {
  const ids = view.nodes.map((n) => n.id).sort((a, b) => a - b);
  const force = new Map<number, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));
  for (let i = 0; i < ids.length; i++) {
    for (let j = i + 1; j < ids.length; j++) {
      const a = layout.positions.get(ids[i]!)!;
      const b = layout.positions.get(ids[j]!)!;
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const distSq = Math.max(dx * dx + dy * dy, 1);
      const dist = Math.sqrt(distSq);
      const push = REPULSION / distSq;
      const fa = force.get(ids[i]!)!;
      const fb = force.get(ids[j]!)!;
      fa.x += (dx / dist) * push;
      fa.y += (dy / dist) * push;
      fb.x -= (dx / dist) * push;
      fb.y -= (dy / dist) * push;
    }
  }
  for (const edge of view.edges) {
    const a = layout.positions.get(edge.source);
    const b = layout.positions.get(edge.target);
    if (!a || !b || edge.source === edge.target) {
      continue;
    }
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-6);
    const pull = SPRING * (dist - REST_LENGTH);
    const fa = force.get(edge.source)!;
    const fb = force.get(edge.target)!;
    fa.x += (dx / dist) * pull;
    fa.y += (dy / dist) * pull;
    fb.x -= (dx / dist) * pull;
    fb.y -= (dy / dist) * pull;
  }
  const positions = new Map<number, Point>();
  const velocities = new Map<number, Point>();
  for (const id of ids) {
    const p = layout.positions.get(id)!;
    const v = layout.velocities.get(id)!;
    const f = force.get(id)!;
    const vx = (v.x + f.x * STEP) * DAMPING;
    const vy = (v.y + f.y * STEP) * DAMPING;
    positions.set(id, { x: p.x + vx * STEP, y: p.y + vy * STEP });
    velocities.set(id, { x: vx, y: vy });
  }
  return { seed: layout.seed, positions, velocities };
}
