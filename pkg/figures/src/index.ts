export * from "./figures.js";
export * from "./schema.js";
export * from "./svg.js";
