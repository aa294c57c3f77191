"""HTTP facade over sessions, prompts, backends, and persistence.

Error mapping: unknown ids are 404, state-machine violations and busy
sessions are 409, validation problems are 422, unreachable backends 502.
Per-session mutations are serialized; the store writes atomically after
every successful mutation.
"""

from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel

from .backends import ImageStore, MockGenerator, MockRetrieval, RemoteGenerator, RemoteRetrieval
from .config import AppConfig
from .corpus import build_index, load_corpus
from .emotion import EmotionBackendConfig, LexiconBackend, make_backend
from .errors import BackendUnavailableError, ProtocolError
from .promptgen import (
    BumpDirection,
    EmptyDraftError,
    EmptyPromptError,
    PromptMode,
)
from .session import (
    BusyError,
    ComposerSession,
    Flow,
    Post,
    TagIndexError,
    UnknownImageError,
    WrongStateError,
)
from .store import JsonStore, post_to_dict, session_to_dict


class CreateSessionBody(BaseModel):
    flow: str = "study_ii"
    baseline: bool = False


class DraftPatchBody(BaseModel):
    title: str | None = None
    body: str | None = None


class TagOpBody(BaseModel):
    op: str  # edit | add | remove | bump
    index: int | None = None
    text: str | None = None
    direction: str | None = None  # up | down


class GenerateBody(BaseModel):
    mode: str = "keyword_based"
    seed: int | None = None


class AttachBody(BaseModel):
    image_id: str


@contextmanager
def _api_errors():
    try:
        yield
    except (BusyError, WrongStateError) as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    except (UnknownImageError, KeyError) as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    except (TagIndexError, IndexError, EmptyDraftError, EmptyPromptError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except (BackendUnavailableError, ProtocolError) as exc:
        raise HTTPException(status_code=502, detail=str(exc)) from exc


def session_snapshot(session: ComposerSession) -> dict:
    doc = session_to_dict(session)
    doc["in_flight"] = session.in_flight
    return doc


class ServiceState:
    """Everything the route handlers share."""

    def __init__(
        self,
        config: AppConfig,
        generator=None,
        retrieval=None,
        emotion_backend=None,
        store: JsonStore | None = None,
        image_store: ImageStore | None = None,
    ):
        self.config = config
        data_dir = Path(config.data_dir)
        self.store = store or JsonStore(data_dir)
        self.image_store = image_store or ImageStore(data_dir / "images")

        if generator is not None:
            self.generator = generator
        elif config.txt2img_kind == "remote":
            self.generator = RemoteGenerator(config.txt2img_endpoint, config.txt2img_timeout_ms)
        else:
            self.generator = MockGenerator()

        if retrieval is not None:
            self.retrieval = retrieval
        elif config.retrieval_kind == "remote":
            self.retrieval = RemoteRetrieval(config.retrieval_endpoint, config.retrieval_timeout_ms)
        else:
            self.retrieval = MockRetrieval()

        if emotion_backend is not None:
            self.emotion_backend = emotion_backend
        else:
            self.emotion_backend = make_backend(
                EmotionBackendConfig(
                    kind=config.emotion_kind,
                    endpoint=config.emotion_endpoint,
                    timeout_ms=config.emotion_timeout_ms,
                )
            )
        self._emotion_fallback = LexiconBackend() if config.emotion_fallback else None

        corpus = load_corpus(config.corpus_path or None)
        self.index = build_index(corpus)

        self.sessions, self.posts = self.store.load_all()

    def classify_backend(self):
        if self._emotion_fallback is None:
            return self.emotion_backend

        fallback = self._emotion_fallback
        primary = self.emotion_backend

        class _WithFallback:
            def classify(self, text):
                try:
                    return primary.classify(text)
                except (BackendUnavailableError, ProtocolError):
                    return fallback.classify(text)

        return _WithFallback()

    def get_session(self, session_id: str) -> ComposerSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    def record_post(self, post: Post) -> None:
        self.store.save_post(post)
        self.posts.insert(0, post)


def create_app(
    config: AppConfig | None = None,
    generator=None,
    retrieval=None,
    emotion_backend=None,
    store: JsonStore | None = None,
    image_store: ImageStore | None = None,
) -> FastAPI:
    state = ServiceState(
        config or AppConfig(),
        generator=generator,
        retrieval=retrieval,
        emotion_backend=emotion_backend,
        store=store,
        image_store=image_store,
    )
    app = FastAPI(title="postimager")
    app.state.service = state

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        with _api_errors():
            flow = Flow(body.flow)
            session = ComposerSession(flow=flow, baseline=body.baseline)
        state.sessions[session.id] = session
        state.store.save_session(session)
        return session_snapshot(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_snapshot(state.get_session(session_id))

    @app.patch("/sessions/{session_id}/draft")
    def patch_draft(session_id: str, body: DraftPatchBody):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            session.edit_draft(title=body.title, body=body.body)
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/detect-keywords")
    def detect_keywords(session_id: str):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            session.detect_keywords(state.index, state.classify_backend())
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/tags")
    def edit_tags(session_id: str, body: TagOpBody):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            if body.op == "add":
                session.add_tag(body.text or "")
            elif body.op == "edit":
                if body.index is None:
                    raise ValueError("edit requires an index")
                session.edit_tag(body.index, body.text or "")
            elif body.op == "remove":
                if body.index is None:
                    raise ValueError("remove requires an index")
                session.remove_tag(body.index)
            elif body.op == "bump":
                if body.index is None or body.direction is None:
                    raise ValueError("bump requires an index and a direction")
                session.bump_tag(body.index, BumpDirection(body.direction))
            else:
                raise ValueError(f"unknown tag op: {body.op}")
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/generate")
    def generate(session_id: str, body: GenerateBody):
        session = state.get_session(session_id)
        with _api_errors():
            mode = PromptMode(body.mode)
            session.generate(
                mode,
                backend=state.generator,
                index=state.index,
                image_store=state.image_store,
                emotion_backend=state.classify_backend(),
                seed=body.seed,
            )
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/back-to-edit")
    def back_to_edit(session_id: str):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            session.back_to_edit()
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/attach")
    def attach(session_id: str, body: AttachBody):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            session.attach_image(body.image_id)
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/detach")
    def detach(session_id: str, body: AttachBody):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            session.detach_image(body.image_id)
        state.store.save_session(session)
        return session_snapshot(session)

    @app.post("/sessions/{session_id}/submit")
    def submit(session_id: str):
        session = state.get_session(session_id)
        with _api_errors(), session.lock:
            post = session.submit()
        state.record_post(post)
        state.store.save_session(session)
        return post_to_dict(post)

    @app.get("/posts")
    def list_posts():
        return [post_to_dict(p) for p in state.posts]

    @app.get("/images/{image_id}")
    def get_image(image_id: str):
        with _api_errors():
            data = state.image_store.get(image_id)
        return Response(content=data, media_type="image/png")

    @app.post("/baseline/upload")
    async def baseline_upload(session_id: str, request: Request):
        session = state.get_session(session_id)
        data = await request.body()
        with _api_errors():
            if not data:
                raise ValueError("empty upload")
            ref = state.image_store.put(data)
            with session.lock:
                session.add_upload(ref)
        state.store.save_session(session)
        return {"image_id": ref, "session": session_snapshot(session)}

    return app


def run(config: AppConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host="127.0.0.1", port=config.port)
