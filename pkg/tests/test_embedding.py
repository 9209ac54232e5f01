import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from summarank.embedding import (
    LocalProvider,
    ProviderConfig,
    RemoteProvider,
    cosine_similarity,
    make_provider,
    mean_pool,
)
from summarank.errors import ConfigError, ProtocolError, ProviderUnavailableError


class TestProviderConfig:
    def test_local_default(self):
        cfg = ProviderConfig()
        assert cfg.kind == "local" and cfg.dim == 400

    def test_remote_requires_endpoint(self):
        with pytest.raises(ConfigError):
            ProviderConfig(kind="remote")

    def test_local_requires_positive_dim(self):
        with pytest.raises(ConfigError):
            ProviderConfig(kind="local", dim=0)

    def test_factory(self):
        assert isinstance(make_provider(ProviderConfig()), LocalProvider)
        remote = make_provider(ProviderConfig(kind="remote", endpoint="http://x"))
        assert isinstance(remote, RemoteProvider)


class TestLocalProvider:
    def test_deterministic(self):
        p = LocalProvider(dim=4)
        a = p.embed_sentence("aaaa")
        b = p.embed_sentence("aaaa")
        np.testing.assert_array_equal(a, b)

    def test_unit_norm(self):
        p = LocalProvider(dim=64)
        v = p.embed_sentence("ঢাকা শহরের খবর")
        assert abs(np.linalg.norm(v) - 1.0) < 1e-9

    def test_paper_default_dim(self):
        v = LocalProvider(dim=400).embed_sentence("ক খ গ")
        assert v.shape == (400,)

    def test_single_char_text(self):
        # boundary markers guarantee at least one 3-gram
        v = LocalProvider(dim=16).embed_sentence("ক")
        assert np.linalg.norm(v) > 0

    def test_rejects_empty_after_normalization(self):
        with pytest.raises(ValueError):
            LocalProvider(dim=8).embed_sentence("!!!")

    def test_embed_tokens_counts(self):
        p = LocalProvider(dim=32)
        assert len(p.embed_tokens("a b c")) == 3
        assert p.embed_tokens("...") == []

    def test_embed_tokens_identical_tokens(self):
        p = LocalProvider(dim=32)
        vecs = p.embed_tokens("x x")
        np.testing.assert_array_equal(vecs[0], vecs[1])

    def test_normalization_applied_before_hashing(self):
        p = LocalProvider(dim=32)
        np.testing.assert_array_equal(
            p.embed_sentence("ক খ।"), p.embed_sentence("  ক   খ  ")
        )

    @given(st.text(alphabet="কখগঘab ", min_size=1, max_size=30))
    def test_determinism_property(self, text):
        """Local embeddings are a pure function of the normalized text."""
        from summarank.text_prep import normalize

        if not normalize(text):
            return
        p = LocalProvider(dim=16)
        np.testing.assert_array_equal(p.embed_sentence(text), p.embed_sentence(text))


class TestMeanPool:
    def test_arithmetic_mean(self):
        got = mean_pool([np.array([1.0, 3.0]), np.array([3.0, 1.0])])
        np.testing.assert_allclose(got, [2.0, 2.0])

    def test_singleton_identity(self):
        v = np.array([0.5, -1.0, 2.0])
        np.testing.assert_array_equal(mean_pool([v]), v)

    def test_cancellation(self):
        got = mean_pool([np.array([1.0, 0.0]), np.array([-1.0, 0.0])])
        np.testing.assert_allclose(got, [0.0, 0.0])

    def test_k_copies(self):
        v = np.array([1.0, 2.0, 3.0])
        np.testing.assert_allclose(mean_pool([v] * 5), v)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mean_pool([])

    def test_mixed_dims_rejected(self):
        with pytest.raises(ValueError):
            mean_pool([np.zeros(2), np.zeros(3)])


class TestCosineSimilarity:
    def test_self_similarity(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine_similarity(v, v) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_hand_value(self):
        got = cosine_similarity(np.array([1.0, 1.0]), np.array([1.0, 0.0]))
        assert got == pytest.approx(0.7071, abs=1e-4)

    def test_both_zero_is_degenerate_zero(self):
        assert cosine_similarity(np.zeros(3), np.zeros(3)) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            cosine_similarity(np.zeros(2), np.zeros(3))

    def test_clamped(self):
        v = np.full(50, 1e3)
        assert cosine_similarity(v, v) <= 1.0

    @given(
        st.lists(st.floats(-5, 5), min_size=3, max_size=3),
        st.lists(st.floats(-5, 5), min_size=3, max_size=3),
        st.floats(0.01, 100.0),
    )
    def test_symmetric_and_scale_invariant(self, a, b, scale):
        """sim(a,b) == sim(b,a) == sim(scale*a, b) for scale > 0."""
        a = np.array(a)
        b = np.array(b)
        if np.linalg.norm(a) == 0 or np.linalg.norm(b) == 0:
            return
        assert cosine_similarity(a, b) == pytest.approx(cosine_similarity(b, a))
        assert cosine_similarity(scale * a, b) == pytest.approx(
            cosine_similarity(a, b), abs=1e-9
        )


class _FakeEmbedServer:
    """Minimal HTTP server speaking the /embed protocol for client tests."""

    def __init__(self, dim=8, fail_times=0, status=200, body=None):
        import http.server
        import json

        dim_ = dim
        state = {"remaining_failures": fail_times}

        class Handler(http.server.BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                if state["remaining_failures"] > 0:
                    state["remaining_failures"] -= 1
                    self.send_response(500)
                    self.end_headers()
                    return
                length = int(self.headers["Content-Length"])
                request = json.loads(self.rfile.read(length))
                if body is not None:
                    payload = body
                elif request["mode"] == "sentence":
                    payload = {
                        "dim": dim_,
                        "embeddings": [[1.0] * dim_ for _ in request["texts"]],
                    }
                else:
                    payload = {
                        "dim": dim_,
                        "token_embeddings": [
                            [[1.0] * dim_ for _ in text.split()]
                            for text in request["texts"]
                        ],
                    }
                raw = json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(raw)))
                self.end_headers()
                self.wfile.write(raw)

        self.server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def endpoint(self):
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


class TestRemoteProvider:
    def test_sentence_mode(self):
        server = _FakeEmbedServer(dim=8)
        try:
            provider = RemoteProvider(server.endpoint, timeout=5)
            vec = provider.embed_sentence("ক খ")
            assert vec.shape == (8,)
            assert provider.dim == 8
        finally:
            server.close()

    def test_tokens_mode(self):
        server = _FakeEmbedServer(dim=4)
        try:
            provider = RemoteProvider(server.endpoint, timeout=5)
            vecs = provider.embed_tokens("a b c")
            assert len(vecs) == 3 and vecs[0].shape == (4,)
        finally:
            server.close()

    def test_retries_then_succeeds(self):
        server = _FakeEmbedServer(dim=4, fail_times=2)
        try:
            provider = RemoteProvider(server.endpoint, timeout=5, max_retries=3)
            assert provider.embed_sentence("x").shape == (4,)
        finally:
            server.close()

    def test_unavailable_after_retries(self):
        provider = RemoteProvider(
            "http://127.0.0.1:1", timeout=0.2, max_retries=1
        )
        with pytest.raises(ProviderUnavailableError):
            provider.embed_sentence("x")

    def test_malformed_body_is_protocol_error(self):
        server = _FakeEmbedServer(body={"unexpected": True})
        try:
            provider = RemoteProvider(server.endpoint, timeout=5, max_retries=0)
            with pytest.raises(ProtocolError):
                provider.embed_sentence("x")
        finally:
            server.close()

    def test_dim_change_is_protocol_error(self):
        server = _FakeEmbedServer(dim=4)
        try:
            provider = RemoteProvider(server.endpoint, timeout=5)
            provider.embed_sentence("x")
            provider.dim = 16  # simulate an earlier call that pinned another dim
            with pytest.raises(ProtocolError):
                provider.embed_sentence("x")
        finally:
            server.close()
