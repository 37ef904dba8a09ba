"""
Utility functions for the garland workbench.
"""
import os
import hashlib
import yaml
import logging
from pathlib import Path

SEED_ENV = "GARLAND_SEED"


def load_config(config_path="config.yaml"):
    """Load configuration from YAML file, filling missing keys with defaults."""
    config = get_default_config()
    try:
        with open(config_path, 'r') as f:
            loaded = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logging.warning(f"Config file {config_path} not found, using defaults")
        return config
    config.update(loaded)
    return config


def get_default_config():
    """Get default configuration."""
    return {
        "m": 2,
        "n": 1,
        "p_is_boundary": False,
        "ring": "z2",
        "sign_rule": "zero",
        "min_copies": 1,
        "max_copies": 3,
        "max_marks": 3,
        "max_grading": 3,
        "max_points": 3,
        "min_degree": -2,
        "max_degree": 6,
        "shared_point_rate": 0.1,
        "trials": 200,
        "seed": 0,
        "family": None,
        "bv_word_bound": 4,
        "bv_max_delta_depth": 2,
        "sign_degree_bound": 2,
        "report_limit": 20,
        "use_multiprocessing": False,
        "max_workers": 4,
        "show_progress": True,
    }


def default_seed(config):
    """Seed from the environment if set, otherwise from config."""
    value = os.environ.get(SEED_ENV)
    if value is not None and value.strip():
        try:
            return int(value)
        except ValueError:
            logging.warning(f"Ignoring non-integer {SEED_ENV}={value!r}")
    return int(config.get("seed", 0))


def calculate_checksum(data):
    """Calculate SHA-256 checksum of data."""
    if isinstance(data, str):
        data = data.encode('utf-8')
    return hashlib.sha256(data).hexdigest()


def setup_logging(log_file=None, level=logging.INFO):
    """Setup logging configuration."""
    handlers = [logging.StreamHandler()]

    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def ensure_directory(path):
    """Ensure directory exists, create if not."""
    Path(path).mkdir(parents=True, exist_ok=True)


def read_text(filepath):
    with open(filepath, 'r', encoding='utf-8') as f:
        return f.read()


def write_text(filepath, text):
    parent = Path(filepath).parent
    if str(parent):
        ensure_directory(parent)
    with open(filepath, 'w', encoding='utf-8') as f:
        f.write(text)
