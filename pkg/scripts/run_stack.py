#!/usr/bin/env python3
"""Boot the full platform on loopback ports and keep it running.

Configuration comes from AGRIFED_* environment variables (see
agrifed.server.config) with CLI overrides for the common knobs.
"""

import argparse
import signal
import sys
import threading

from agrifed.server.config import AppConfig
from agrifed.stack import launch_stack


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--store", default=None, help="document store directory")
    parser.add_argument("--port", type=int, default=None, help="public API port")
    parser.add_argument("--epsilon", type=float, default=None, help="default sketch budget")
    parser.add_argument(
        "--manual-consent",
        action="store_true",
        help="require collaborator consent before jobs start",
    )
    args = parser.parse_args()

    config = AppConfig.from_env()
    if args.store:
        config.store_path = args.store
    if args.epsilon is not None:
        config.epsilon_default = args.epsilon
    if args.manual_consent:
        config.auto_consent = False

    port = args.port if args.port is not None else config.listen_port
    stack = launch_stack(config.store_path, config=config, app_port=port)
    print(f"public API     {stack.base_url}/api/v1")
    print(f"compute slots  {stack.node_http.base_url} (internal)")
    print(f"orchestrator   {stack.param_http.base_url} (internal)")
    print(f"store          {config.store_path}")

    stop = threading.Event()
    signal.signal(signal.SIGINT, lambda *_: stop.set())
    signal.signal(signal.SIGTERM, lambda *_: stop.set())
    stop.wait()
    stack.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
