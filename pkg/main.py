#!/usr/bin/env python3
"""Command line entry point for the Discrete Gauss Map Toolkit"""

import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Project root on the path so the src package imports from any working directory
sys.path.insert(0, str(Path(__file__).parent))

from src.config.settings import get_settings
from src.controllers.app_controller import AppController
from src.controllers.command_controller import CommandController, build_parser
from src.exceptions import UsageError


def setup_logging():
    """Configures basic logging before the controller takes over"""
    logging.basicConfig(
        level=logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Runs one command, prints its JSON report and returns the exit code"""
    setup_logging()
    logger = logging.getLogger('GaussMap.Main')
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        envelope = {'schema_version': get_settings().schema_version, 'status': 'error', 'error': e.to_dict()}
        print(json.dumps(envelope, sort_keys=True))
        return e.exit_code
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    settings = get_settings(args.config)
    if args.log_level:
        settings.set('logging.level', args.log_level.upper())

    app_controller = AppController(settings)
    commands = CommandController(app_controller)
    code, payload = commands.execute(args)
    print(commands.render(payload, args.output))
    logger.debug(f"{args.command} finished with exit code {code}")
    return code


def main():
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logging.getLogger('GaussMap.Main').info("Interrupted by user")
        sys.exit(1)


if __name__ == "__main__":
    main()
