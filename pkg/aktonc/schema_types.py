from __future__ import annotations

from typing import Literal, TypedDict

EdgeKindLiteral = Literal["normal", "cut-spatial", "cut-planar"]

ProgramStatusLiteral = Literal["draft", "checked", "invalid"]


class ViolationPayload(TypedDict):
    code: str
    message: str
    path: str


class CutPairPayload(TypedDict):
    tail: str
    head: str
    family: str
    twist: str


class CutBindingsPayload(TypedDict):
    pairs: list[CutPairPayload]
    families: dict[str, int]


# "in" is a keyword, hence the functional form.
CheckPayload = TypedDict(
    "CheckPayload",
    {
        "ok": bool,
        "sort": str | None,
        "in": str,
        "out": str,
        "violations": list[ViolationPayload],
        "cuts": CutBindingsPayload | None,
    },
)

DefinitionPayload = TypedDict(
    "DefinitionPayload",
    {"name": str, "sort": str, "in": str, "out": str},
)


class NodePayload(TypedDict, total=False):
    id: int
    atom: str
    sort: str
    label: str


EdgePayload = TypedDict(
    "EdgePayload",
    {"from": list[int], "to": list[int], "kind": EdgeKindLiteral},
)


class NetworkPayload(TypedDict):
    nodes: list[NodePayload]
    edges: list[EdgePayload]


class ProgramMetadata(TypedDict):
    name: str
    slug: str
    description: str
    status: ProgramStatusLiteral


class ProgramReport(TypedDict):
    program: ProgramMetadata
    term: str | None
    definitions: list[DefinitionPayload]
    check: CheckPayload
    network: NetworkPayload | None
    metric: bool
