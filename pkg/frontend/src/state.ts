/**
 * View state: bearer session plus cached lists with staleness timestamps.
 * Logout purges everything. Credentials are never stored, only the token.
 */

import type { ChatMessage, DatasetMeta, ModelSummary, SimilarityEntry } from "./api.js";

interface CacheEntry<T> {
  value: T;
  fetchedAt: number;
}

export type Page = "login" | "upload" | "similar" | "chat" | "train" | "models";

export class ViewStore {
  token: string | null = null;
  subject: string | null = null;
  page: Page = "login";

  private caches = new Map<string, CacheEntry<unknown>>();

  constructor(private clock: () => number = () => Date.now()) {}

  setSession(token: string, subject: string): void {
    this.token = token;
    this.subject = subject;
  }

  get loggedIn(): boolean {
    return this.token !== null;
  }

  logout(): void {
    this.token = null;
    this.subject = null;
    this.page = "login";
    this.caches.clear();
  }

  putCache<T>(key: string, value: T): void {
    this.caches.set(key, { value, fetchedAt: this.clock() });
  }

  getCache<T>(key: string, maxAgeMs: number): T | undefined {
    const entry = this.caches.get(key);
    if (!entry) return undefined;
    if (this.clock() - entry.fetchedAt > maxAgeMs) {
      this.caches.delete(key);
      return undefined;
    }
    return entry.value as T;
  }

  invalidate(key: string): void {
    this.caches.delete(key);
  }

  cachedKeys(): string[] {
    return [...this.caches.keys()];
  }

  // typed conveniences for the lists pages share
  putDatasets(list: DatasetMeta[]): void {
    this.putCache("datasets", list);
  }

  getDatasets(maxAgeMs = 10_000): DatasetMeta[] | undefined {
    return this.getCache("datasets", maxAgeMs);
  }

  putModels(list: ModelSummary[]): void {
    this.putCache("models", list);
  }

  getModels(maxAgeMs = 10_000): ModelSummary[] | undefined {
    return this.getCache("models", maxAgeMs);
  }

  putPeers(datasetId: string, scores: SimilarityEntry[]): void {
    this.putCache(`peers:${datasetId}`, scores);
    this.putCache("peers:latest", scores);
  }

  latestPeers(maxAgeMs = 300_000): SimilarityEntry[] | undefined {
    return this.getCache("peers:latest", maxAgeMs);
  }

  putConversation(peer: string, messages: ChatMessage[]): void {
    this.putCache(`chat:${peer}`, messages);
  }

  getConversation(peer: string, maxAgeMs = 3_000): ChatMessage[] | undefined {
    return this.getCache(`chat:${peer}`, maxAgeMs);
  }
}
