import { App } from "./app.js";
import { ApiClient } from "./api.js";
import { DEFAULT_CONFIG, type UiConfig } from "./types.js";

declare global {
  interface Window {
    ARCHIVE_LENS_CONFIG?: Partial<UiConfig>;
  }
}

const config: UiConfig = { ...DEFAULT_CONFIG, ...window.ARCHIVE_LENS_CONFIG };
const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

const app = new App(root, new ApiClient(config.apiBase), config);
app.init();
