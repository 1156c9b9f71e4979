/** Page bootstrap: fetch layout, render the board, wire the controls. */

import { Board } from './board.js';
import { ApiClient, UiSession, fetchLayoutWithRetry, type Mode } from './session.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function renderStatus(target: HTMLElement, outcome: { kind: string; remaining?: number; retryAfter?: number; detail?: string }): void {
  target.className = `status status-${outcome.kind}`;
  switch (outcome.kind) {
    case 'enrolled':
      target.textContent = 'Password enrolled. Switch to unlock to try it.';
      break;
    case 'accepted':
      target.textContent = 'Unlocked.';
      break;
    case 'rejected':
      target.textContent = `Wrong password. ${outcome.remaining ?? 0} attempts left.`;
      break;
    case 'locked':
      target.textContent = `Locked out. Retry in ${Math.ceil(outcome.retryAfter ?? 0)}s.`;
      break;
    default:
      target.textContent = outcome.detail ?? 'Something went wrong.';
  }
}

export async function boot(baseUrl = ''): Promise<void> {
  const api = new ApiClient(baseUrl);
  const banner = el<HTMLDivElement>('banner');
  let layout;
  try {
    layout = await fetchLayoutWithRetry(api, 5, (attempt) => {
      banner.hidden = false;
      banner.textContent = `Cannot reach the lock service (attempt ${attempt}). Retrying...`;
    });
  } catch {
    banner.hidden = false;
    banner.textContent = 'Cannot reach the lock service. Reload to retry.';
    return;
  }
  banner.hidden = true;

  const boardHost = el<HTMLDivElement>('board');
  const status = el<HTMLDivElement>('status');
  const userInput = el<HTMLInputElement>('user');
  const modeSelect = el<HTMLSelectElement>('mode');
  const submitBtn = el<HTMLButtonElement>('submit');
  const resetBtn = el<HTMLButtonElement>('reset');
  const movesOut = el<HTMLDivElement>('moves');

  let session: UiSession;
  const board = new Board(boardHost, layout, {
    onFirstTouch: () => session.markFirstTouch(),
    onCommit: () => {
      movesOut.textContent = `${board.committed.length} move(s)`;
    },
  });

  const newSession = () => {
    session = new UiSession(api, board, modeSelect.value as Mode);
    session.markReady();
    board.reset();
    movesOut.textContent = '0 move(s)';
    status.className = 'status';
    status.textContent = '';
  };
  newSession();

  modeSelect.addEventListener('change', newSession);
  resetBtn.addEventListener('click', newSession);
  submitBtn.addEventListener('click', async () => {
    const outcome = await session.submit(userInput.value || 'demo');
    renderStatus(status, outcome);
    const mode = modeSelect.value as Mode;
    session = new UiSession(api, board, mode);
    session.markReady();
    board.reset();
  });
}

if (typeof document !== 'undefined' && document.getElementById('board')) {
  void boot();
}
