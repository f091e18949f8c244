#!/usr/bin/env python3
"""Start the HTTP service with all-mock backends (no models needed).

Usage: python3 scripts/serve_mock.py [--port 8000]
The web frontend in frontend/ talks to this server out of the box.
"""

import argparse

import uvicorn

from sinassist.config import mock_config, resolve_backends
from sinassist.service import create_app


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args()

    # fixed echo text so microphone recordings produce a transcript
    from sinassist.config import RoleConfig

    config = mock_config(
        stt=RoleConfig(kind="mock-echo", params={"echo_text": "ගස ගම වත"})
    )
    app = create_app(resolve_backends(config))
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
