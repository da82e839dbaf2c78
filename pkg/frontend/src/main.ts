import { createApp } from "./app.js";

declare global {
  interface Window {
    AGRIFED_API_BASE?: string;
  }
}

const base = window.AGRIFED_API_BASE ?? "";
const app = createApp(base);
document.body.appendChild(app.root);
