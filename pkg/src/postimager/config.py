"""Runtime configuration: JSON key-value file with environment overrides.

Environment variables named POSTIMAGER_<FIELD> (upper-cased field name)
take precedence over file values, which take precedence over defaults.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_PREFIX = "POSTIMAGER_"


@dataclass
class AppConfig:
    port: int = 8000
    data_dir: str = "./postimager-data"
    corpus_path: str = ""  # empty = bundled demo corpus

    txt2img_kind: str = "mock"  # mock | remote
    txt2img_endpoint: str = ""
    txt2img_timeout_ms: int = 30000

    retrieval_kind: str = "mock"
    retrieval_endpoint: str = ""
    retrieval_timeout_ms: int = 15000

    emotion_kind: str = "lexicon"  # lexicon | remote
    emotion_endpoint: str = ""
    emotion_timeout_ms: int = 5000
    emotion_fallback: bool = True  # fall back to the lexicon when remote fails

    gen_steps: int = 20
    gen_width: int = 512
    gen_height: int = 512

    def __post_init__(self) -> None:
        if self.txt2img_kind not in ("mock", "remote"):
            raise ValueError(f"unknown txt2img kind: {self.txt2img_kind}")
        if self.retrieval_kind not in ("mock", "remote"):
            raise ValueError(f"unknown retrieval kind: {self.retrieval_kind}")
        if self.emotion_kind not in ("lexicon", "remote"):
            raise ValueError(f"unknown emotion kind: {self.emotion_kind}")
        if self.txt2img_kind == "remote" and not self.txt2img_endpoint:
            raise ValueError("remote txt2img requires an endpoint")
        if self.retrieval_kind == "remote" and not self.retrieval_endpoint:
            raise ValueError("remote retrieval requires an endpoint")
        if self.emotion_kind == "remote" and not self.emotion_endpoint:
            raise ValueError("remote emotion backend requires an endpoint")


def _coerce(value: str, target_type) -> object:
    if target_type is bool:
        return value.strip().lower() in ("1", "true", "yes", "on")
    if target_type is int:
        return int(value)
    return value


def load_config(path: Path | str | None = None, env: dict | None = None) -> AppConfig:
    """Build the config from defaults, an optional JSON file, and the env."""
    env = os.environ if env is None else env
    values: dict = {}
    if path:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError(f"config file must hold a JSON object: {path}")
        values.update(doc)

    known = {f.name: f.type for f in dataclasses.fields(AppConfig)}
    unknown = set(values) - set(known)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    for f in dataclasses.fields(AppConfig):
        env_key = ENV_PREFIX + f.name.upper()
        if env_key in env:
            base = f.type if isinstance(f.type, type) else type(f.default)
            values[f.name] = _coerce(env[env_key], base)
    return AppConfig(**values)
