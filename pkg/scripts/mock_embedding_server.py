#!/usr/bin/env python3
"""Stand-in embedding service speaking the documented JSON protocol.

POST {"words": [...]} -> {"dimension": D, "vectors": {word: [...]}}.
Vectors are derived from a hash of each word, so they are stable across
runs and machines; useful for exercising `sufa cluster --endpoint` without
a real embedding model.

Usage: python scripts/mock_embedding_server.py [port] [dimension]
"""

import hashlib
import json
import struct
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

DIMENSION = 16


def word_vector(word: str, dimension: int) -> list[float]:
    out = []
    counter = 0
    while len(out) < dimension:
        digest = hashlib.sha256(f"{word}\x00{counter}".encode("utf-8")).digest()
        for i in range(0, len(digest) - 7, 8):
            (value,) = struct.unpack(">q", digest[i:i + 8])
            out.append(round(value / 2 ** 63, 6))
            if len(out) == dimension:
                break
        counter += 1
    return out


class Handler(BaseHTTPRequestHandler):
    dimension = DIMENSION

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        try:
            body = json.loads(self.rfile.read(length) or b"{}")
            words = body["words"]
        except (ValueError, KeyError):
            self.send_response(400)
            self.end_headers()
            return
        payload = json.dumps({
            "dimension": self.dimension,
            "vectors": {w: word_vector(w.lower(), self.dimension) for w in words},
        }).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, fmt, *args):
        sys.stderr.write(f"mock-embedding: {fmt % args}\n")


def main() -> None:
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 8090
    Handler.dimension = int(sys.argv[2]) if len(sys.argv) > 2 else DIMENSION
    server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
    print(f"mock embedding service on http://127.0.0.1:{port} "
          f"(dimension {Handler.dimension})")
    server.serve_forever()


if __name__ == "__main__":
    main()
