"""Core data model: discourse units, tree nodes, binary discourse trees, templates.

Trees are immutable values. Every construction returns fresh objects; all
operations elsewhere in the package rewrite trees functionally, so concurrent
reads are always safe.

Structural conventions enforced here:

* internal nodes are relation nodes with exactly two ordered children
  (binarity is built into the node types and cannot be violated),
* an auxiliary template has exactly one foot node and it is the leftmost
  terminal,
* substitution sites sit on the right edge: each site is the rightmost
  terminal of its parent's subtree, and no non-empty terminal may appear
  to the right of any site in the terminal frontier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

# Relation labels are opaque strings compared by exact equality ("Contrast",
# "A/C", "Evidence", ...). No closed enum: callers may introduce their own
# relation taxonomy.
RelationLabel = str

# Flat string-to-string feature maps. Nested feature structures are not
# needed by anything in this package.
Features = dict[str, str]

# Feature key marking a relation node whose label is a placeholder chosen by
# coercion. Such labels may later be refined to a marker-supplied relation.
COHESION_KEY = "cohesion"
COHESION_UNSPECIFIED = "unspecified"


class TreeError(ValueError):
    """Base class for structural errors raised by this package."""


class InvalidTreeError(TreeError):
    """A tree or template breaks a structural invariant that must hold."""


class FeatureConflict(TreeError):
    """Two feature maps bind the same key to different values."""

    def __init__(self, key: str, left: str, right: str):
        super().__init__(f"feature conflict on {key!r}: {left!r} vs {right!r}")
        self.key = key


def unify_features(a: Mapping[str, str], b: Mapping[str, str]) -> Features:
    """Union of two feature maps; raises FeatureConflict on a clashing key.

    Commutative and associative on conflict-free inputs; the empty map is
    the identity.
    """
    merged = dict(a)
    for key, value in b.items():
        if key in merged and merged[key] != value:
            raise FeatureConflict(key, merged[key], value)
        merged[key] = value
    return merged


@dataclass(frozen=True)
class DiscourseUnit:
    """A basic discourse unit (usually a clause) at position `seq` in the input."""

    id: str
    text: str
    seq: int

    def __post_init__(self) -> None:
        if self.seq < 0:
            raise ValueError(f"unit seq must be >= 0, got {self.seq}")


@dataclass(frozen=True)
class RelationNode:
    """Internal node: a coherence relation holding between its two children."""

    id: str
    label: RelationLabel
    left: "Node"
    right: "Node"
    features: Features = field(default_factory=dict)


@dataclass(frozen=True)
class LeafNode:
    """Non-empty terminal carrying a discourse unit."""

    id: str
    unit: DiscourseUnit
    features: Features = field(default_factory=dict)


@dataclass(frozen=True)
class FootNode:
    """Empty terminal of an auxiliary template, identified with the excised
    subtree when the template is adjoined."""

    id: str
    features: Features = field(default_factory=dict)


@dataclass(frozen=True)
class SiteNode:
    """Empty terminal encoding an expectation: future material must fill it.

    `rank` mirrors the conventional down-arrow numbering in drawings; it is
    bookkeeping only and never affects legality, which is a matter of
    embedding depth.
    """

    id: str
    rank: int
    features: Features = field(default_factory=dict)


Node = Union[RelationNode, LeafNode, FootNode, SiteNode]
TerminalNode = Union[LeafNode, FootNode, SiteNode]


def children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, RelationNode):
        return (node.left, node.right)
    return ()


def iter_preorder(node: Node) -> Iterator[Node]:
    yield node
    for child in children(node):
        yield from iter_preorder(child)


def iter_terminals(node: Node) -> Iterator[TerminalNode]:
    """Left-to-right (in-order) listing of the terminals below `node`."""
    if isinstance(node, RelationNode):
        yield from iter_terminals(node.left)
        yield from iter_terminals(node.right)
    else:
        yield node


def renumber(node: Node, start: int = 0) -> Node:
    """Copy of `node` with ids n<start>, n<start+1>, ... assigned in preorder."""
    counter = itertools.count(start)

    def rebuild(n: Node) -> Node:
        nid = f"n{next(counter)}"
        if isinstance(n, RelationNode):
            left = rebuild(n.left)
            right = rebuild(n.right)
            return RelationNode(nid, n.label, left, right, dict(n.features))
        if isinstance(n, LeafNode):
            return LeafNode(nid, n.unit, dict(n.features))
        if isinstance(n, FootNode):
            return FootNode(nid, dict(n.features))
        return SiteNode(nid, n.rank, dict(n.features))

    return rebuild(node)


@dataclass(frozen=True)
class DiscourseTree:
    """A strict binary discourse tree with indexed access by node id.

    Identity of nodes is the opaque `id` string, unique within the tree.
    The parent/depth indexes are derived at construction and the value is
    immutable afterwards.
    """

    root: Node
    _nodes: dict[str, Node] = field(init=False, repr=False, compare=False)
    _parents: dict[str, Optional[str]] = field(init=False, repr=False, compare=False)
    _depths: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes: dict[str, Node] = {}
        parents: dict[str, Optional[str]] = {}
        depths: dict[str, int] = {}

        def walk(node: Node, parent: Optional[str], depth: int) -> None:
            if node.id in nodes:
                raise InvalidTreeError(f"duplicate node id {node.id!r}")
            nodes[node.id] = node
            parents[node.id] = parent
            depths[node.id] = depth
            for child in children(node):
                walk(child, node.id, depth + 1)

        walk(self.root, None, 0)
        object.__setattr__(self, "_nodes", nodes)
        object.__setattr__(self, "_parents", parents)
        object.__setattr__(self, "_depths", depths)

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node(self, node_id: str) -> Node:
        return self._nodes[node_id]

    def parent_id(self, node_id: str) -> Optional[str]:
        return self._parents[node_id]

    def depth(self, node_id: str) -> int:
        return self._depths[node_id]

    def nodes(self) -> Iterator[Node]:
        return iter_preorder(self.root)

    @property
    def terminals(self) -> tuple[TerminalNode, ...]:
        return tuple(iter_terminals(self.root))

    @property
    def sites(self) -> tuple[SiteNode, ...]:
        """Substitution sites in frontier order (strictly decreasing depth)."""
        return tuple(t for t in self.terminals if isinstance(t, SiteNode))

    @property
    def units(self) -> tuple[DiscourseUnit, ...]:
        return tuple(t.unit for t in self.terminals if isinstance(t, LeafNode))

    def subtree(self, node_id: str) -> Node:
        return self._nodes[node_id]

    def rewrite(self, node_id: str, replacement: Node) -> "DiscourseTree":
        """New tree with the subtree at `node_id` replaced by `replacement`."""
        if node_id not in self._nodes:
            raise KeyError(node_id)

        def rebuild(node: Node) -> Node:
            if node.id == node_id:
                return replacement
            if isinstance(node, RelationNode):
                left = rebuild(node.left)
                right = rebuild(node.right)
                if left is node.left and right is node.right:
                    return node
                return RelationNode(node.id, node.label, left, right, node.features)
            return node

        return DiscourseTree(rebuild(self.root))

    def max_id_index(self) -> int:
        """Largest numeric suffix among ids of the form n<k>, or -1."""
        best = -1
        for nid in self._nodes:
            if nid.startswith("n") and nid[1:].isdigit():
                best = max(best, int(nid[1:]))
        return best

    def max_site_rank(self) -> int:
        return max((s.rank for s in self.sites), default=0)


def new_leaf_tree(unit: DiscourseUnit) -> DiscourseTree:
    """Degenerate tree consisting only of its root, a non-empty terminal."""
    return DiscourseTree(LeafNode("n0", unit))


def terminal_frontier(tree: DiscourseTree) -> tuple[TerminalNode, ...]:
    """Left-to-right listing of all terminals, empty ones included."""
    return tree.terminals


def nonempty_frontier(tree: DiscourseTree) -> tuple[LeafNode, ...]:
    return tuple(t for t in tree.terminals if isinstance(t, LeafNode))


ELEMENTARY = "elementary"
AUXILIARY = "auxiliary"


@dataclass(frozen=True)
class TreeTemplate:
    """An elementary or auxiliary tree schema, combined into derived trees
    by substitution (elementary) or adjoining (auxiliary)."""

    category: str
    shape: DiscourseTree

    def __post_init__(self) -> None:
        if self.category not in (ELEMENTARY, AUXILIARY):
            raise ValueError(f"unknown template category {self.category!r}")

    @property
    def root(self) -> Node:
        return self.shape.root


def elementary(root: Node) -> TreeTemplate:
    return TreeTemplate(ELEMENTARY, DiscourseTree(renumber(root)))


def auxiliary(root: Node) -> TreeTemplate:
    return TreeTemplate(AUXILIARY, DiscourseTree(renumber(root)))


def expected_relation(tree: DiscourseTree, site_id: str) -> Optional[RelationLabel]:
    """Label of the relation node governing a site: what kind of material
    the expectation is waiting for."""
    parent = tree.parent_id(site_id)
    if parent is None:
        return None
    node = tree.node(parent)
    return node.label if isinstance(node, RelationNode) else None


def signature(node: Node) -> tuple:
    """Structural signature: shape, relation labels, and leaf units, ignoring
    node ids, site ranks and features."""
    if isinstance(node, RelationNode):
        return ("rel", node.label, signature(node.left), signature(node.right))
    if isinstance(node, LeafNode):
        return ("leaf", node.unit.id, node.unit.seq)
    if isinstance(node, FootNode):
        return ("foot",)
    return ("site",)


def structurally_equal(a: DiscourseTree, b: DiscourseTree) -> bool:
    """Equality on labels, leaf order and shape; ids and features ignored."""
    return signature(a.root) == signature(b.root)


def _sites_with_depth(tree: DiscourseTree) -> list[tuple[SiteNode, int]]:
    return [(s, tree.depth(s.id)) for s in tree.sites]


def _validate_shape(tree: DiscourseTree, violations: list[str]) -> None:
    terminals = tree.terminals

    for node in tree.nodes():
        if isinstance(node, RelationNode) and not node.label:
            violations.append(f"empty relation label at node {node.id}")

    feet = [t for t in terminals if isinstance(t, FootNode)]
    if len(feet) > 1:
        violations.append("more than one foot node")
    if feet and terminals[0] is not feet[0]:
        violations.append("foot not leftmost terminal")

    # Sites must close off the right edge: nothing non-empty to their right.
    seen_site = False
    for t in terminals:
        if isinstance(t, SiteNode):
            seen_site = True
        elif seen_site and isinstance(t, LeafNode):
            violations.append(
                f"non-empty terminal {t.unit.id!r} to the right of a substitution site"
            )
    # Each site is the rightmost terminal of its parent's subtree.
    for site in tree.sites:
        parent = tree.parent_id(site.id)
        if parent is None:
            continue
        last = list(iter_terminals(tree.node(parent)))[-1]
        if last is not site:
            violations.append(f"site {site.id} is not rightmost under its parent")

    depths = [d for _, d in _sites_with_depth(tree)]
    if len(depths) >= 2 and sorted(depths)[-1] == sorted(depths)[-2]:
        violations.append("two substitution sites share maximal depth")


def _validate_template(template: TreeTemplate, violations: list[str],
                       forbid_deep_foot: bool) -> None:
    tree = template.shape
    terminals = tree.terminals
    feet = [t for t in terminals if isinstance(t, FootNode)]
    leaves = [t for t in terminals if isinstance(t, LeafNode)]

    if template.category == ELEMENTARY:
        if feet:
            violations.append("elementary template contains a foot node")
        if not leaves:
            violations.append("elementary template has no non-empty terminal")
    else:
        if len(feet) != 1:
            violations.append("auxiliary template must have exactly one foot node")
        if not isinstance(tree.root, RelationNode):
            violations.append("auxiliary root is not a relation node")
        if not leaves:
            violations.append("auxiliary template has no non-empty terminal")
        if forbid_deep_foot and feet and isinstance(tree.root, RelationNode):
            if tree.root.left is not feet[0]:
                violations.append("foot is not a direct child of the auxiliary root")


def _foot_sister_of_site(tree: DiscourseTree) -> bool:
    deepest: Optional[SiteNode] = None
    depth = -1
    for site, d in _sites_with_depth(tree):
        if d > depth:
            deepest, depth = site, d
    if deepest is None:
        return False
    parent = tree.parent_id(deepest.id)
    if parent is None:
        return False
    pnode = tree.node(parent)
    return isinstance(pnode, RelationNode) and isinstance(pnode.left, FootNode)


def validate(obj: Union[DiscourseTree, TreeTemplate], *,
             forbid_foot_sister_of_site: bool = True,
             forbid_deep_foot: bool = False) -> list[str]:
    """Return every violated invariant of a tree or template; [] means OK.

    `forbid_foot_sister_of_site` rejects templates whose most embedded site
    has the foot as its left sister (the bundled lexicon never builds one,
    and adjoining into such a shape has no attested use). `forbid_deep_foot`
    additionally rejects auxiliaries whose foot is not a direct child of the
    root; those shapes are representable but unused, so they are accepted by
    default.
    """
    violations: list[str] = []
    if isinstance(obj, TreeTemplate):
        tree = obj.shape
        _validate_shape(tree, violations)
        _validate_template(obj, violations, forbid_deep_foot)
    else:
        tree = obj
        _validate_shape(tree, violations)
    if forbid_foot_sister_of_site and _foot_sister_of_site(tree):
        violations.append("foot node is the left sister of the most embedded site")
    return violations
