// Base URL of the graph API. Empty string means same-origin, which is the
// deployment mode when the bundle is served by `compgraph serve --static`.
export const API_BASE = "";
