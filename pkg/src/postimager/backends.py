"""Image-generation and image-retrieval clients plus deterministic mocks.

The remote txt2img wire format is the common open REST convention: JSON
request in, base64-encoded PNG list out. The mocks derive every byte from
a hash of their inputs so offline runs are reproducible.
"""

from __future__ import annotations

import base64
import hashlib
import io
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import requests
from PIL import Image, PngImagePlugin

from .errors import BackendUnavailableError, ProtocolError


class NoResultsError(RuntimeError):
    """The retrieval provider returned no downloadable result."""


@dataclass(frozen=True)
class GenRequest:
    prompt: str
    batch_size: int = 4
    seed: int | None = None
    steps: int = 20
    width: int = 512
    height: int = 512
    negative_prompt: str = ""

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")


@dataclass(frozen=True)
class GenResult:
    images: tuple[bytes, ...]
    seed_used: int
    latency_ms: float


def _solid_png(width: int, height: int, digest: bytes, label: str) -> bytes:
    color = (digest[0], digest[1], digest[2])
    image = Image.new("RGB", (width, height), color)
    meta = PngImagePlugin.PngInfo()
    meta.add_text("source-hash", digest.hex())
    meta.add_text("source", label)
    buf = io.BytesIO()
    image.save(buf, format="PNG", pnginfo=meta)
    return buf.getvalue()


class MockGenerator:
    """Pure function of (prompt, seed, batch_size, index) to PNG bytes."""

    def txt2img(self, request: GenRequest) -> GenResult:
        start = time.monotonic()
        seed = (
            request.seed
            if request.seed is not None
            else zlib.crc32(request.prompt.encode("utf-8")) & 0x7FFFFFFF
        )
        images = []
        for i in range(request.batch_size):
            digest = hashlib.sha256(
                f"{request.prompt}|{seed}|{i}".encode("utf-8")
            ).digest()
            images.append(
                _solid_png(request.width, request.height, digest, "mock-generator")
            )
        latency = (time.monotonic() - start) * 1000.0
        return GenResult(images=tuple(images), seed_used=seed, latency_ms=latency)


class RemoteGenerator:
    """Client for a txt2img HTTP endpoint."""

    def __init__(self, endpoint: str, timeout_ms: int = 30000, session: requests.Session | None = None):
        if not endpoint:
            raise ValueError("remote generator requires an endpoint")
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self._session = session or requests.Session()

    def txt2img(self, request: GenRequest) -> GenResult:
        payload = {
            "prompt": request.prompt,
            "batch_size": request.batch_size,
            "seed": request.seed,
            "steps": request.steps,
            "width": request.width,
            "height": request.height,
            "negative_prompt": request.negative_prompt,
        }
        start = time.monotonic()
        try:
            response = self._session.post(
                self.endpoint, json=payload, timeout=self.timeout_ms / 1000.0
            )
            response.raise_for_status()
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"txt2img backend: {exc}") from exc
        latency = (time.monotonic() - start) * 1000.0
        try:
            body = response.json()
            encoded = body["images"]
            seed_used = int(body.get("seed", request.seed or 0))
            images = tuple(base64.b64decode(item) for item in encoded)
        except (ValueError, KeyError, TypeError) as exc:
            raise ProtocolError(f"txt2img backend returned malformed payload: {exc}") from exc
        if len(images) != request.batch_size:
            raise ProtocolError(
                f"expected {request.batch_size} images, got {len(images)}"
            )
        return GenResult(images=images, seed_used=seed_used, latency_ms=latency)


@dataclass(frozen=True)
class RetrievalQuery:
    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.terms) <= 5:
            raise ValueError("retrieval queries carry one to five terms")


class MockRetrieval:
    """Returns a deterministic fixture image keyed by the sorted terms."""

    def first_image(self, query: RetrievalQuery) -> bytes:
        key = ",".join(sorted(query.terms))
        digest = hashlib.sha256(f"retrieval|{key}".encode("utf-8")).digest()
        return _solid_png(512, 512, digest, "mock-retrieval")


class RemoteRetrieval:
    """Client for an image-search endpoint; downloads the first result."""

    def __init__(self, endpoint: str, timeout_ms: int = 15000, session: requests.Session | None = None):
        if not endpoint:
            raise ValueError("remote retrieval requires an endpoint")
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self._session = session or requests.Session()

    def first_image(self, query: RetrievalQuery) -> bytes:
        timeout = self.timeout_ms / 1000.0
        try:
            response = self._session.get(
                self.endpoint, params={"q": " ".join(query.terms)}, timeout=timeout
            )
            response.raise_for_status()
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"retrieval backend: {exc}") from exc
        try:
            results = response.json()["results"]
        except (ValueError, KeyError) as exc:
            raise ProtocolError(f"retrieval backend returned malformed payload: {exc}") from exc
        if not results:
            raise NoResultsError(f"no results for terms {query.terms}")
        url = results[0].get("url", "")
        if not url:
            raise ProtocolError("first retrieval result carries no url")
        try:
            image = self._session.get(url, timeout=timeout)
            image.raise_for_status()
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"retrieval download: {exc}") from exc
        return image.content


@dataclass
class ImageStore:
    """Content-addressed image files: id = sha256 of the bytes."""

    root: Path
    _cache: dict[str, Path] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.root = Path(self.root)
        self.root.mkdir(parents=True, exist_ok=True)

    def put(self, data: bytes) -> str:
        image_id = hashlib.sha256(data).hexdigest()
        path = self.root / f"{image_id}.png"
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.replace(path)
        self._cache[image_id] = path
        return image_id

    def get(self, image_id: str) -> bytes:
        path = self.root / f"{image_id}.png"
        if not path.exists():
            raise KeyError(image_id)
        return path.read_bytes()

    def __contains__(self, image_id: str) -> bool:
        return (self.root / f"{image_id}.png").exists()
