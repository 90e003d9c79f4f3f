export * from "./types.js";
export * from "./api.js";
export * from "./layout.js";
export * from "./session.js";
export * from "./events.js";
