"""Build hooks for customizing generated test instances.

The corpus assembles every groupoid and local system as a plain payload
dict first, passes it through the registered post-build hooks, and only
then constructs (and validates) the domain object. Hooks may rewrite the
payload; the mutation hooks below corrupt one entry so the law suites can
demonstrate that they notice.

Example usage:
    from extlin.core.hooks import HookRunner, PostBuildHook

    class RenameGroupoids(PostBuildHook):
        def post_build(self, kind, payload):
            if kind == "groupoid":
                payload["name"] = "renamed:" + payload["name"]
            return payload

    runner = HookRunner()
    runner.add_post_hook(RenameGroupoids())
"""

import logging
from typing import Any, Dict, Protocol, runtime_checkable

from .finvect import LinearMap

logger = logging.getLogger(__name__)

Payload = Dict[str, Any]


@runtime_checkable
class PostBuildHook(Protocol):
    """Protocol for post-build hooks.

    A payload of kind ``"groupoid"`` has the keys ``objects``,
    ``morphisms`` (``(id, src, dst)`` triples), ``identities``, ``table``
    and ``name``. A payload of kind ``"local_system"`` has ``base``,
    ``fibers``, ``transport`` and ``name``.
    """

    def post_build(self, kind: str, payload: Payload) -> Payload:
        """Called before a generated object is constructed.

        Args:
            kind: ``"groupoid"`` or ``"local_system"``
            payload: The constructor arguments

        Returns:
            The (possibly modified) payload
        """
        ...


class TransposeTransportHook:
    """Replaces one transport matrix by its transpose.

    Only the first local system with a non-symmetric transport along a
    morphism that is not its own inverse is touched, so the result always
    breaks functoriality; later payloads pass unchanged.
    """

    def __init__(self):
        self.fired = False

    def post_build(self, kind: str, payload: Payload) -> Payload:
        if self.fired or kind != "local_system":
            return payload
        base = payload["base"]
        identities = set(base.identities.values())
        for m, t in payload["transport"].items():
            if m in identities or base.inverse(m) == m or t.domain.dim != t.codomain.dim:
                continue
            flipped = t.transpose_matrix()
            if flipped == t.matrix:
                continue
            payload["transport"] = dict(payload["transport"])
            payload["transport"][m] = LinearMap(t.domain, t.codomain, flipped)
            self.fired = True
            logger.debug("transposed transport along %r in %s", m, payload.get("name"))
            break
        return payload


class CorruptCompositionHook:
    """Redirects one composite in the first groupoid table that allows it.

    The corrupted entry keeps its endpoints, so the payload still has the
    shape of a groupoid and only the laws can reject it.
    """

    def __init__(self):
        self.fired = False

    def post_build(self, kind: str, payload: Payload) -> Payload:
        if self.fired or kind != "groupoid":
            return payload
        identities = set(payload["identities"].values())
        ends = {m: (s, d) for m, s, d in payload["morphisms"]}
        for (g, f), h in payload["table"].items():
            if g in identities or f in identities:
                continue
            rivals = [m for m, e in ends.items() if e == ends[h] and m != h]
            if not rivals:
                continue
            payload["table"] = dict(payload["table"])
            payload["table"][(g, f)] = rivals[0]
            self.fired = True
            logger.debug("corrupted composite (%r, %r) in %s", g, f, payload.get("name"))
            break
        return payload


class HookRunner:
    """Runs a collection of hooks in order."""

    def __init__(self):
        self.post_hooks: list[PostBuildHook] = []

    def add_post_hook(self, hook: PostBuildHook):
        """Add a post-build hook."""
        self.post_hooks.append(hook)

    def run_post_hooks(self, kind: str, payload: Payload) -> Payload:
        """Run all post-build hooks in order."""
        for hook in self.post_hooks:
            payload = hook.post_build(kind, payload)
        return payload
