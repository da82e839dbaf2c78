/** Application shell: navigation, session gate, page switching. */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { buildChatView } from "./pages/chat.js";
import { buildLoginPage } from "./pages/login.js";
import { buildModelsPage } from "./pages/models.js";
import { buildSimilarPage } from "./pages/similar.js";
import { buildTrainingForm } from "./pages/training.js";
import { buildUploadPage } from "./pages/upload.js";
import type { Page } from "./state.js";
import { ViewStore } from "./state.js";

export interface App {
  root: HTMLElement;
  store: ViewStore;
  api: ApiClient;
  navigate: (page: Page) => void;
}

export function createApp(baseUrl: string): App {
  const store = new ViewStore();
  const api = new ApiClient(baseUrl, () => store.token);

  const root = el("div", { class: "app" });
  const nav = el("nav", { class: "topnav" });
  const main = el("main", {});

  const pages: [Page, string][] = [
    ["upload", "Upload"],
    ["similar", "Similar farmers"],
    ["chat", "Chat"],
    ["train", "Train"],
    ["models", "Models"],
  ];

  function navigate(page: Page): void {
    store.page = page;
    clear(main);
    if (!store.loggedIn && page !== "login") {
      navigate("login");
      return;
    }
    switch (page) {
      case "login":
        main.appendChild(buildLoginPage({ api, store, onLogin: () => navigate("upload") }));
        break;
      case "upload":
        main.appendChild(buildUploadPage({ api, store }));
        break;
      case "similar":
        main.appendChild(buildSimilarPage({ api, store }));
        break;
      case "chat": {
        const peers = (store.latestPeers() ?? []).map((s) => s.peer);
        main.appendChild(buildChatView({ api, store, peers }));
        break;
      }
      case "train":
        main.appendChild(buildTrainingForm({ api, store }));
        break;
      case "models":
        main.appendChild(buildModelsPage({ api, store }));
        break;
    }
  }

  for (const [page, label] of pages) {
    const button = el("button", { text: label, "data-nav": page });
    button.addEventListener("click", () => navigate(page));
    nav.appendChild(button);
  }
  const logout = el("button", { text: "Log out", "data-nav": "logout" });
  logout.addEventListener("click", () => {
    store.logout(); // purges token and every cached list
    navigate("login");
  });
  nav.appendChild(logout);

  root.append(nav, main);
  navigate("login");
  return { root, store, api, navigate };
}
