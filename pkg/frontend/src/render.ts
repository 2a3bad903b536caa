// Pure view layer: every function maps state to an HTML string. Interactive
// elements carry data-action attributes; src/main.ts binds them through event
// delegation. Nothing here mutates state or talks to the network.

import type { Block, DiffOp } from "./model.js";
import type { AnnotatorApp, PairSession } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderDiff(ops: DiffOp[]): string {
  const lines = ops.map((op) => {
    const prefix = op.op === "insert" ? "+ " : op.op === "delete" ? "- " : "  ";
    return `<span class="diff-${op.op}">${escapeHtml(prefix + op.line)}</span>`;
  });
  return `<pre class="diff">${lines.join("\n")}</pre>`;
}

function blockCard(
  session: PairSession,
  side: "pred" | "cur",
  block: Block,
): string {
  const selected =
    session.selection?.side === side && session.selection.localId === block.localId;
  const classes = ["block", block.blockType, selected ? "selected" : ""]
    .filter(Boolean)
    .join(" ");
  const parts: string[] = [];
  parts.push(
    `<div class="${classes}" data-action="block" data-side="${side}" data-local-id="${block.localId}">`,
  );
  parts.push(
    `<div class="block-head">#${block.localId} ${block.blockType}${statusBadge(session, side, block)}</div>`,
  );
  parts.push(`<pre class="content">${escapeHtml(block.content)}</pre>`);
  if (side === "cur") parts.push(curControls(session, block));
  parts.push("</div>");
  return parts.join("");
}

function statusBadge(session: PairSession, side: "pred" | "cur", block: Block): string {
  if (side === "pred") {
    const owner = session.predClaimedBy(block.localId);
    return owner === null ? "" : ` <span class="claimed">&rarr; block ${owner}</span>`;
  }
  const link = session.links.get(block.localId);
  if (link === undefined) return ' <span class="open">unannotated</span>';
  if (link.predLocalId === null) {
    return ' <span class="no-pred">no predecessor</span>';
  }
  return ` <span class="linked ${link.source}">&larr; #${link.predLocalId} (${link.source})</span>`;
}

function curControls(session: PairSession, block: Block): string {
  const link = session.links.get(block.localId);
  const parts: string[] = ['<div class="controls">'];
  parts.push(
    `<button data-action="no-pred" data-local-id="${block.localId}">no predecessor</button>`,
  );
  if (link !== undefined) {
    parts.push(
      `<button data-action="clear" data-local-id="${block.localId}">clear</button>`,
    );
    if (link.predLocalId !== null) {
      const label = session.diffs.has(block.localId) ? "hide diff" : "diff";
      parts.push(
        `<button data-action="diff" data-local-id="${block.localId}">${label}</button>`,
      );
    }
    parts.push(
      `<input data-action="comment" data-local-id="${block.localId}" ` +
        `placeholder="comment" value="${escapeHtml(link.comment)}">`,
    );
  }
  parts.push("</div>");
  const diff = session.diffs.get(block.localId);
  if (diff !== undefined) parts.push(renderDiff(diff));
  return parts.join("");
}

function renderPair(app: AnnotatorApp, session: PairSession): string {
  const payload = session.payload;
  const { settled, total } = app.completionSummary();
  const complete = total > 0 && settled === total;
  const parts: string[] = [];
  parts.push('<div class="pair">');
  parts.push(
    `<div class="pair-head">post ${payload.postId}: version ${payload.predVersion} &rarr; ${payload.curVersion}` +
      ` <span class="progress">${settled} of ${total} pairs annotated</span>` +
      (complete ? ' <span class="complete">sample complete</span>' : "") +
      "</div>",
  );
  parts.push(
    '<div class="nav">' +
      '<button data-action="prev">previous</button>' +
      '<button data-action="next">next</button>' +
      `<label><input type="checkbox" data-action="skip"${app.skipFullyAuto ? " checked" : ""}> skip fully auto-connected</label>` +
      `<button data-action="save"${session.dirty ? ' class="dirty"' : ""}>save</button>` +
      '<a href="/export" download="annotations.csv">export</a>' +
      "</div>",
  );
  if (session.hint !== null) {
    parts.push(`<div class="hint">${escapeHtml(session.hint)}</div>`);
  }
  if (app.notice !== null) {
    parts.push(`<div class="notice">${escapeHtml(app.notice)}</div>`);
  }
  parts.push('<div class="columns">');
  parts.push(
    `<div class="column"><h2>version ${payload.predVersion}</h2>` +
      payload.predBlocks.map((b) => blockCard(session, "pred", b)).join("") +
      "</div>",
  );
  parts.push(
    `<div class="column"><h2>version ${payload.curVersion}</h2>` +
      payload.curBlocks.map((b) => blockCard(session, "cur", b)).join("") +
      "</div>",
  );
  parts.push("</div></div>");
  return parts.join("");
}

export function renderApp(app: AnnotatorApp): string {
  if (!app.started) return '<div class="loading">loading&hellip;</div>';
  if (app.banner !== null) {
    return `<div class="banner">${escapeHtml(app.banner)}</div>`;
  }
  if (app.isEmpty) {
    return (
      '<div class="empty">' +
      `<p>sample ${escapeHtml(app.sample)} has no version pairs to annotate.</p>` +
      "</div>"
    );
  }
  if (app.stale) {
    return (
      '<div class="stale">' +
      "<p>annotations changed outside this session; reload to continue.</p>" +
      '<button data-action="reload">reload</button>' +
      "</div>"
    );
  }
  if (app.session === null) {
    return `<div class="notice">${escapeHtml(app.notice ?? "no pair selected")}</div>`;
  }
  return renderPair(app, app.session);
}
