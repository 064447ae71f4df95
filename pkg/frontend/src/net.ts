/** Thin WebSocket wrapper with an injectable socket factory for tests. */

import { ClientMessage, ServerMessage, parseServerMessage } from "./messages.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ConsoleLink {
  send(msg: ClientMessage): void;
  close(): void;
}

export function connect(
  url: string,
  handlers: {
    onOpen: () => void;
    onClose: () => void;
    onMessage: (msg: ServerMessage) => void;
  },
  factory: SocketFactory = (u) => new WebSocket(u) as unknown as SocketLike,
): ConsoleLink {
  const socket = factory(url);
  let open = false;
  socket.onopen = () => {
    open = true;
    handlers.onOpen();
  };
  socket.onclose = () => {
    open = false;
    handlers.onClose();
  };
  socket.onmessage = (ev) => {
    if (typeof ev.data !== "string") return;
    const msg = parseServerMessage(ev.data);
    if (msg) handlers.onMessage(msg);
  };
  return {
    send(msg: ClientMessage): void {
      if (open) socket.send(JSON.stringify(msg));
    },
    close(): void {
      socket.close();
    },
  };
}
