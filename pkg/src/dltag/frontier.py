"""Right frontiers and the legal attachment sites they induce.

With no substitution site pending, adjoining may target any node on the
outer right frontier, the path from the root to the rightmost terminal.
With sites pending, adjoining is confined to the inner right frontier, the
path rooted at the left sister of the most embedded site and running down
to that sister's rightmost descendant. Substitution is only ever allowed
at the most embedded site.
"""

from __future__ import annotations

from typing import Optional

from .tree_core import (
    DiscourseTree,
    Node,
    RelationNode,
    SiteNode,
    TreeError,
)

FrontierPath = list[str]


class NoPendingSiteError(TreeError):
    """The tree has no substitution site where one is required."""


class AmbiguousSiteDepthError(TreeError):
    """Two substitution sites share maximal depth; no unique innermost site."""


def _rightmost_path(tree: DiscourseTree, top: Node) -> FrontierPath:
    path = [top.id]
    node = top
    while isinstance(node, RelationNode):
        node = node.right
        path.append(node.id)
    return path


def outer_rf(tree: DiscourseTree) -> FrontierPath:
    """Path of node ids from the root down to the rightmost terminal."""
    return _rightmost_path(tree, tree.root)


def most_embedded_site(tree: DiscourseTree) -> Optional[SiteNode]:
    """The deepest pending substitution site, or None if no site is pending.

    Depth ties cannot arise in trees built by the legal operations; they are
    rejected defensively.
    """
    best: Optional[SiteNode] = None
    best_depth = -1
    tie = False
    for site in tree.sites:
        depth = tree.depth(site.id)
        if depth > best_depth:
            best, best_depth, tie = site, depth, False
        elif depth == best_depth:
            tie = True
    if tie:
        raise AmbiguousSiteDepthError(
            f"two substitution sites at depth {best_depth}"
        )
    return best


def substitution_target(tree: DiscourseTree) -> Optional[SiteNode]:
    """The only node where substitution is allowed: the most embedded site."""
    return most_embedded_site(tree)


def inner_rf(tree: DiscourseTree) -> FrontierPath:
    """Right frontier rooted at the left sister of the most embedded site."""
    site = most_embedded_site(tree)
    if site is None:
        raise NoPendingSiteError("no substitution site pending; use outer_rf")
    parent_id = tree.parent_id(site.id)
    if parent_id is None:
        raise NoPendingSiteError("substitution site has no parent (bare site tree)")
    parent = tree.node(parent_id)
    assert isinstance(parent, RelationNode) and parent.right.id == site.id, \
        "a pending site is always the right child of its parent"
    return _rightmost_path(tree, parent.left)


def adjoin_sites(tree: DiscourseTree) -> tuple[str, ...]:
    """Node ids where adjoining is legal, ordered along the governing path.

    This is the inner right frontier when a site is pending, otherwise the
    outer right frontier.
    """
    if tree.sites:
        return tuple(inner_rf(tree))
    return tuple(outer_rf(tree))
