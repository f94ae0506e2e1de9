"""
Command-line surface of the lab.
"""

from .config import SCHEMAS, Setting, load_config_file, parse_config_text, resolve
from .main import build_parser, dispatch, main
