/**
 * Draft-issue state: the clipboard pane plus the ordered article list.
 * Pure data operations so the composer logic is testable without a DOM.
 */

import {
  EntityNode,
  ProviderInfo,
  SurrogateError,
  buildIssueDocument,
  parseSurrogate,
} from "./surrogate.js";

export const EDITOR_PROVIDER = "info:sid/pathways.demo:editor";

export interface ArticleCard {
  providerInfo: ProviderInfo;
  sourceProvider: string;
  label: string;
  surrogate: string;
}

function labelFor(entity: EntityNode): string {
  if (entity.identifiers.length > 0) return entity.identifiers[0];
  if (entity.providerInfo) return entity.providerInfo.preferredIdentifier;
  return "(unidentified entity)";
}

export class DraftIssue {
  articles: ArticleCard[] = [];
  draftId: string;

  constructor(draftId?: string) {
    this.draftId =
      draftId ?? `info:overlay-ui/issue/${Date.now().toString(36)}-${Math.random().toString(36).slice(2, 8)}`;
  }

  /**
   * Parse a pasted surrogate and append an article card. Throws
   * SurrogateError on invalid input and leaves the draft unchanged.
   */
  addFromSurrogate(text: string): ArticleCard {
    const entity = parseSurrogate(text);
    if (!entity.providerInfo) {
      throw new SurrogateError("pasted surrogate's root entity has no providerInfo");
    }
    const card: ArticleCard = {
      providerInfo: entity.providerInfo,
      sourceProvider: entity.providerInfo.provider,
      label: labelFor(entity),
      surrogate: text,
    };
    this.articles.push(card);
    return card;
  }

  move(index: number, delta: -1 | 1): boolean {
    const target = index + delta;
    if (index < 0 || index >= this.articles.length) return false;
    if (target < 0 || target >= this.articles.length) return false;
    const [card] = this.articles.splice(index, 1);
    this.articles.splice(target, 0, card);
    return true;
  }

  remove(index: number): void {
    this.articles.splice(index, 1);
  }

  clear(): void {
    this.articles = [];
  }

  /** The issue surrogate; hasEntity order equals the card order. */
  buildDocument(): string {
    return buildIssueDocument({
      draftId: this.draftId,
      editorProvider: EDITOR_PROVIDER,
      articles: this.articles.map((card) => ({
        provider: card.providerInfo.provider,
        preferredIdentifier: card.providerInfo.preferredIdentifier,
        versionKey: card.providerInfo.versionKey,
      })),
    });
  }
}
