"""Exception hierarchy shared across the workbench.

Every error carries a stable machine-readable ``code`` (by default the class
name) so API handlers and the CLI can surface failures uniformly.
"""

from __future__ import annotations


class MindforgeError(Exception):
    """Base class for all workbench errors."""

    code: str = "MindforgeError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if "code" not in cls.__dict__:
            cls.code = cls.__name__


# mindmap parsing / mutation

class MalformedXml(MindforgeError):
    pass


class NotAMindmap(MindforgeError):
    pass


class DuplicateId(MindforgeError):
    pass


class UnknownNode(MindforgeError):
    pass


class IdCollision(MindforgeError):
    pass


# query expansion

class ZeroLevel(MindforgeError):
    pass


class EmptyCorpus(MindforgeError):
    pass


# venue catalog

class EmptyCatalog(MindforgeError):
    pass


# wrapper configs and execution

class MalformedConfig(MindforgeError):
    pass


class UnknownProcessor(MindforgeError):
    pass


class DuplicateVarDef(MindforgeError):
    pass


class UnboundVariable(MindforgeError):
    pass


class FetchFailed(MindforgeError):
    def __init__(self, url: str, reason: str = ""):
        self.url = url
        self.reason = reason
        msg = f"fetch failed for {url!r}" + (f": {reason}" if reason else "")
        super().__init__(msg)


class TypeMismatch(MindforgeError):
    pass


class XPathError(MindforgeError):
    pass


class UnsupportedXPath(XPathError):
    pass


class XPathSyntaxError(XPathError):
    # the public error code keeps the short name
    code = "SyntaxError"


# orchestration

class NoCandidates(MindforgeError):
    pass


class AbstractNotFound(MindforgeError):
    pass


class AllSourcesFailed(MindforgeError):
    pass


# results organizing

class InvalidRegex(MindforgeError):
    pass


# service configuration

class ConfigError(MindforgeError):
    pass
