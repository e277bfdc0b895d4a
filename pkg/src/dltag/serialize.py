"""Reading and writing trees: compact bracket notation and a JSON format.

Bracket notation, used in CLI output and throughout the tests:

    Contrast(a, A/C(b, ↓2))

* `Label(left, right)` is a relation node,
* a bare identifier is a non-empty terminal printed as its unit id,
* `*` is a foot node,
* `↓n` (ASCII alternative `!n`) is a substitution site of rank n.

Parsing a bracket string builds units from the identifiers, assigning `seq`
in frontier order, so the notation doubles as a terse tree constructor.
The JSON format is lossless (unit text and seq, features, ranks).
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .tree_core import (
    AUXILIARY,
    ELEMENTARY,
    DiscourseTree,
    DiscourseUnit,
    FootNode,
    LeafNode,
    Node,
    RelationNode,
    SiteNode,
    TreeTemplate,
    iter_terminals,
    renumber,
)


class FormatError(ValueError):
    """Malformed bracket text or JSON tree document."""


def to_bracket(obj: DiscourseTree | TreeTemplate | Node) -> str:
    if isinstance(obj, TreeTemplate):
        node = obj.shape.root
    elif isinstance(obj, DiscourseTree):
        node = obj.root
    else:
        node = obj
    return _render(node)


def _render(node: Node) -> str:
    if isinstance(node, RelationNode):
        return f"{node.label}({_render(node.left)}, {_render(node.right)})"
    if isinstance(node, LeafNode):
        return node.unit.id
    if isinstance(node, FootNode):
        return "*"
    return f"↓{node.rank}"


class _BracketParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Node:
        node = self._node()
        self._skip_ws()
        if self.pos != len(self.text):
            raise FormatError(f"trailing text at offset {self.pos}: {self.text[self.pos:]!r}")
        return node

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _node(self) -> Node:
        self._skip_ws()
        if self.pos >= len(self.text):
            raise FormatError("unexpected end of input")
        ch = self.text[self.pos]
        if ch == "*":
            self.pos += 1
            return FootNode("")
        if ch in ("↓", "!"):
            self.pos += 1
            return SiteNode("", self._int())
        token = self._token()
        self._skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            self.pos += 1
            left = self._node()
            self._expect(",")
            right = self._node()
            self._expect(")")
            return RelationNode("", token, left, right)
        # Bare identifier: a terminal standing for a discourse unit.
        return LeafNode("", DiscourseUnit(token, token, 0))

    def _token(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in "(),*↓!" \
                and not self.text[self.pos].isspace():
            self.pos += 1
        if self.pos == start:
            raise FormatError(f"expected a name at offset {start}")
        return self.text[start:self.pos]

    def _int(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise FormatError(f"expected a site rank at offset {start}")
        return int(self.text[start:self.pos])

    def _expect(self, ch: str) -> None:
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise FormatError(f"expected {ch!r} at offset {self.pos}")
        self.pos += 1


def _sequence_units(root: Node) -> Node:
    """Assign seq numbers to bracket-built units in frontier order."""
    leaves = [t for t in iter_terminals(root) if isinstance(t, LeafNode)]
    seqs = {id(leaf): i for i, leaf in enumerate(leaves)}

    def rebuild(node: Node) -> Node:
        if isinstance(node, RelationNode):
            return RelationNode(node.id, node.label, rebuild(node.left),
                                rebuild(node.right), node.features)
        if isinstance(node, LeafNode):
            unit = DiscourseUnit(node.unit.id, node.unit.text, seqs[id(node)])
            return LeafNode(node.id, unit, node.features)
        return node

    return rebuild(root)


def parse_bracket(text: str) -> DiscourseTree:
    """Build a tree from bracket notation.

    Identifiers become units whose text is the identifier and whose seq
    follows frontier order, which keeps every bracket-built tree sequential.
    """
    root = _BracketParser(text).parse()
    return DiscourseTree(renumber(_sequence_units(root)))


def parse_bracket_template(text: str, category: Optional[str] = None) -> TreeTemplate:
    """Build a template from bracket notation; category inferred from the
    presence of a foot node unless given explicitly."""
    tree = parse_bracket(text)
    if category is None:
        has_foot = any(isinstance(t, FootNode) for t in tree.terminals)
        category = AUXILIARY if has_foot else ELEMENTARY
    return TreeTemplate(category, tree)


def node_to_dict(node: Node) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if isinstance(node, RelationNode):
        out["kind"] = "relation"
        out["label"] = node.label
        out["children"] = [node_to_dict(node.left), node_to_dict(node.right)]
    elif isinstance(node, LeafNode):
        out["kind"] = "leaf"
        out["unit"] = {"id": node.unit.id, "text": node.unit.text, "seq": node.unit.seq}
    elif isinstance(node, FootNode):
        out["kind"] = "empty"
        out["role"] = "foot"
    else:
        out["kind"] = "empty"
        out["role"] = "site"
        out["rank"] = node.rank
    if node.features:
        out["features"] = dict(sorted(node.features.items()))
    return out


def node_from_dict(data: dict[str, Any]) -> Node:
    if not isinstance(data, dict) or "kind" not in data:
        raise FormatError("node record must be an object with a 'kind' field")
    features = dict(data.get("features", {}))
    kind = data["kind"]
    if kind == "relation":
        kids = data.get("children", [])
        if len(kids) != 2:
            raise FormatError(
                f"relation node must be binary, got {len(kids)} children"
            )
        label = data.get("label", "")
        return RelationNode("", label, node_from_dict(kids[0]),
                            node_from_dict(kids[1]), features)
    if kind == "leaf":
        unit = data.get("unit")
        if not isinstance(unit, dict):
            raise FormatError("leaf node needs a 'unit' object")
        return LeafNode("", DiscourseUnit(str(unit["id"]), str(unit.get("text", unit["id"])),
                                          int(unit.get("seq", 0))), features)
    if kind == "empty":
        role = data.get("role")
        if role == "foot":
            return FootNode("", features)
        if role == "site":
            return SiteNode("", int(data.get("rank", 1)), features)
        raise FormatError(f"unknown empty-node role {role!r}")
    raise FormatError(f"unknown node kind {kind!r}")


def tree_to_dict(tree: DiscourseTree) -> dict[str, Any]:
    return {"root": node_to_dict(tree.root)}


def tree_from_dict(data: dict[str, Any]) -> DiscourseTree:
    if "root" not in data:
        raise FormatError("tree document needs a 'root' field")
    return DiscourseTree(renumber(node_from_dict(data["root"])))


def template_to_dict(template: TreeTemplate) -> dict[str, Any]:
    return {"category": template.category, "root": node_to_dict(template.root)}


def template_from_dict(data: dict[str, Any]) -> TreeTemplate:
    category = data.get("category")
    if category not in (ELEMENTARY, AUXILIARY):
        raise FormatError(f"unknown template category {category!r}")
    return TreeTemplate(category, tree_from_dict(data))


def dumps(data: dict[str, Any]) -> str:
    """Stable JSON rendering used by the CLI (sorted keys, no timestamps)."""
    return json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def load_tree_text(text: str) -> DiscourseTree:
    """Read a tree from JSON (text starting with '{') or bracket notation."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad JSON: {exc}") from exc
        return tree_from_dict(data)
    return parse_bracket(stripped)
