"""Launch the session service over HTTP.

Serves the JSON API the browser client talks to. Sessions are held in
memory and expire after the idle TTL; state lives and dies with the
process.
"""
from __future__ import annotations

import argparse

import uvicorn

from tilesim.service import create_app


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8765)
    ap.add_argument("--idle-ttl", type=float, default=3600.0,
                    help="seconds an untouched session survives")
    args = ap.parse_args(argv)

    uvicorn.run(create_app(idle_ttl=args.idle_ttl),
                host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
