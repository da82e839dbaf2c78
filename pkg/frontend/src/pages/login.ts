/** Sign-in / local registration. Only the issued token is kept. */

import type { ApiClient } from "../api.js";
import { ApiError } from "../api.js";
import { banner, clear, el } from "../dom.js";
import { messageFor } from "../errors.js";
import type { ViewStore } from "../state.js";

export interface LoginPageContext {
  api: ApiClient;
  store: ViewStore;
  onLogin: () => void;
}

export function buildLoginPage(ctx: LoginPageContext): HTMLElement {
  const root = el("section", { class: "page page-login" });
  const username = el("input", { type: "text", "data-field": "username", placeholder: "Username" });
  const credential = el("input", {
    type: "password",
    "data-field": "credential",
    placeholder: "Password",
  });
  const status = el("div", { "data-role": "status" });

  async function submit(register: boolean): Promise<void> {
    clear(status);
    try {
      if (register) {
        await ctx.api.register(username.value, credential.value);
      }
      const session = await ctx.api.login(username.value, credential.value);
      ctx.store.setSession(session.token, session.subject);
      credential.value = "";
      ctx.onLogin();
    } catch (err) {
      if (err instanceof ApiError) {
        status.appendChild(banner("error", messageFor(err.code, err.message), err.code));
      } else {
        status.appendChild(banner("error", String(err)));
      }
    }
  }

  const loginButton = el("button", { text: "Sign in", "data-action": "login" });
  loginButton.addEventListener("click", () => void submit(false));
  const registerButton = el("button", { text: "Create account", "data-action": "register" });
  registerButton.addEventListener("click", () => void submit(true));

  root.append(el("h2", { text: "Sign in" }), username, credential, loginButton, registerButton, status);
  return root;
}
