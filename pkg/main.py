"""
Main Application Entry Point
FAE Toolkit - dilated-convolution VAE for univariate time-series anomaly detection

Usage: python main.py <command> [--config FILE] [--set KEY=VALUE ...]
"""
import argparse
import logging
import sys

import config
from cli.commands import command_dispatcher
from utils.constants import COMMANDS


def build_parser():
    parser = argparse.ArgumentParser(prog="main.py", description=config.APP_NAME)
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--config', dest='config_path', default=None, help="key=value config file")
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help="override one config key (repeatable)")
    parser.add_argument('--version', action='version', version=f"{config.APP_NAME} {config.APP_VERSION}")
    return parser


def main(argv=None):
    """Main application entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT, stream=sys.stderr)

    result = command_dispatcher.run(args.command, args.config_path, args.overrides)
    if result['success']:
        if result['message']:
            print(result['message'])
    else:
        message = " ".join(result['message'].split())
        print(f"error={result['family']} message={message}", file=sys.stderr)
    return result['exit_code']


if __name__ == '__main__':
    sys.exit(main())
