"""Rooted planar trees of the perturbative expansion of F."""

from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from utils.errors import PreconditionError


@dataclass(frozen=True)
class Leaf:
    """A y-occurrence y_index."""

    index: int

    def canonical(self) -> str:
        return f"y{self.index}"


@dataclass(frozen=True)
class Vertex:
    """A tensor entry V_{index; j_1..j_Q}; children are in outgoing-slot order."""

    index: int
    children: Tuple[Union["Vertex", Leaf], ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise PreconditionError(
                f"vertex {self.index} has out-degree {len(self.children)}, expected at least 2")

    @property
    def out_indices(self) -> Tuple[int, ...]:
        return tuple(child.index for child in self.children)

    def canonical(self) -> str:
        return f"V{self.index}[" + ",".join(child.canonical() for child in self.children) + "]"


Node = Union[Vertex, Leaf]


@dataclass(frozen=True)
class Edge:
    """The edge entering a node.

    ``position`` is the node's preorder rank, which is also its rank in the
    around-the-tree order; ``depth`` counts edges from the root edge (1).
    """

    position: int
    index: int
    parent: Optional[int]
    depth: int
    is_leaf: bool


class Tree:
    """A decorated tree with root index i: either a bare y_i or a vertex V_{i;...}.

    Every node has exactly one incoming edge, carrying the node's index, so
    edges and nodes correspond one to one.
    """

    def __init__(self, root: Node):
        self.root = root
        edges: List[Edge] = []
        stack: List[Tuple[Node, Optional[int], int]] = [(root, None, 1)]
        while stack:
            node, parent, depth = stack.pop()
            position = len(edges)
            edges.append(Edge(position, node.index, parent, depth, isinstance(node, Leaf)))
            if isinstance(node, Vertex):
                for child in reversed(node.children):
                    stack.append((child, position, depth + 1))
        self._edges: Tuple[Edge, ...] = tuple(edges)

    @property
    def root_index(self) -> int:
        return self.root.index

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    def vertices(self) -> Iterator[Vertex]:
        """Vertices in preorder."""
        stack: List[Node] = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Vertex):
                yield node
                stack.extend(reversed(node.children))

    def leaf_indices(self) -> List[int]:
        return [edge.index for edge in self._edges if edge.is_leaf]

    @property
    def vertex_count(self) -> int:
        """r, the number of vertices."""
        return sum(1 for edge in self._edges if not edge.is_leaf)

    @property
    def leaf_count(self) -> int:
        """N, the number of y's."""
        return sum(1 for edge in self._edges if edge.is_leaf)

    def ancestors(self, position: int) -> Iterator[int]:
        """Positions of the edges strictly above ``position``, nearest first."""
        parent = self._edges[position].parent
        while parent is not None:
            yield parent
            parent = self._edges[parent].parent

    def canonical(self) -> str:
        return self.root.canonical()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'root_index': self.root_index,
            'canonical': self.canonical(),
            'vertices': self.vertex_count,
            'leaves': self.leaf_count,
        }

    def __str__(self) -> str:
        return self.canonical()

    def __repr__(self) -> str:
        return f"Tree({self.canonical()})"


@dataclass(frozen=True)
class EdgeOrder:
    """Tree order and around-the-tree order on the edges of one tree.

    ``tree_pairs`` holds (a, b) with a <_tree b; ``around`` lists edge
    positions from smallest to largest in the around-the-tree order.
    """

    tree_pairs: frozenset
    around: Tuple[int, ...]

    def tree_less(self, a: int, b: int) -> bool:
        return (a, b) in self.tree_pairs

    def around_less(self, a: int, b: int) -> bool:
        return self.around.index(a) < self.around.index(b)

    def comparable(self, a: int, b: int) -> bool:
        return self.tree_less(a, b) or self.tree_less(b, a)

    def extends_tree_order(self) -> bool:
        """Every tree-order pair is ordered the same way around the tree."""
        rank = {position: k for k, position in enumerate(self.around)}
        return all(rank[a] < rank[b] for a, b in self.tree_pairs)
