/**
 * Chat: conversation list plus a thread view with 3-second polling and
 * optimistic append (the local copy is reconciled when the server's
 * message arrives). Empty messages never leave the client.
 */

import type { ApiClient, ChatMessage } from "../api.js";
import { ApiError } from "../api.js";
import { banner, clear, el } from "../dom.js";
import { messageFor } from "../errors.js";
import type { ViewStore } from "../state.js";

export const CHAT_POLL_MS = 3000;

export interface ChatPageContext {
  api: ApiClient;
  store: ViewStore;
  peers?: string[];
}

export function buildChatView(ctx: ChatPageContext): HTMLElement {
  const root = el("section", { class: "page page-chat" });
  const peerList = el("ul", { class: "peer-list", "data-role": "peer-list" });
  const thread = el("ul", { class: "thread", "data-role": "thread" });
  const status = el("div", { "data-role": "status" });
  const input = el("input", { type: "text", "data-field": "message", placeholder: "Message…" });
  const send = el("button", { text: "Send", "data-action": "send" });

  let activePeer: string | null = null;
  let pending: ChatMessage[] = [];
  let timer: ReturnType<typeof setTimeout> | null = null;

  function renderThread(messages: ChatMessage[]): void {
    clear(thread);
    const serverIds = new Set(messages.map((m) => m.message_id));
    const serverBodies = new Set(messages.map((m) => `${m.sender}:${m.body}`));
    pending = pending.filter(
      (p) => !serverIds.has(p.message_id) && !serverBodies.has(`${p.sender}:${p.body}`),
    );
    for (const m of [...messages, ...pending]) {
      thread.appendChild(
        el("li", {
          class: m.sender === ctx.store.subject ? "msg msg-mine" : "msg msg-theirs",
          "data-message-id": m.message_id,
          "data-pending": pending.includes(m) ? "true" : "false",
          text: `${m.sender}: ${m.body}`,
        }),
      );
    }
  }

  async function refresh(): Promise<void> {
    if (!activePeer) return;
    try {
      const { messages } = await ctx.api.conversation(activePeer);
      ctx.store.putConversation(activePeer, messages);
      renderThread(messages);
    } catch {
      // transient polling failure; next tick retries
    }
  }

  function schedule(): void {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      void refresh().finally(schedule);
    }, CHAT_POLL_MS);
  }

  function openPeer(peer: string): void {
    activePeer = peer;
    pending = [];
    void refresh();
    schedule();
  }

  for (const peer of ctx.peers ?? []) {
    const item = el("li", { "data-peer": peer, text: peer });
    item.addEventListener("click", () => openPeer(peer));
    peerList.appendChild(item);
  }

  send.addEventListener("click", async () => {
    clear(status);
    const body = input.value;
    if (!activePeer) return;
    if (body.trim() === "") {
      status.appendChild(banner("error", "Message is empty.", "EmptyBody"));
      return; // never sent to the server
    }
    const optimistic: ChatMessage = {
      message_id: `local-${Date.now()}`,
      sender: ctx.store.subject ?? "me",
      recipient: activePeer,
      body,
      sent_at: Date.now() / 1000,
    };
    pending.push(optimistic);
    renderThread(ctx.store.getConversation(activePeer, Infinity) ?? []);
    input.value = "";
    try {
      await ctx.api.sendMessage(activePeer, body);
      await refresh();
    } catch (err) {
      // one retry, then surface the failure
      try {
        await ctx.api.sendMessage(activePeer, body);
        await refresh();
      } catch {
        pending = pending.filter((p) => p !== optimistic);
        if (err instanceof ApiError) {
          status.appendChild(banner("error", messageFor(err.code, err.message), err.code));
        } else {
          status.appendChild(banner("error", String(err)));
        }
      }
    }
  });

  root.append(
    el("h2", { text: "Chat" }),
    peerList,
    thread,
    input,
    send,
    status,
  );
  return root;
}
