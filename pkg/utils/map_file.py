"""Reading and writing maps as canonical JSON documents.

A map file stores the vertex V of x -> x - V(x)::

    {"components": [[{"coeff": "1", "exps": [0, 2]}], []], "d": 2, "n": 2}

Coefficients are "p/q" or integer strings; repeated monomials are summed.
"""

import hashlib
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from models.poly_map import PolyMap
from models.polynomial import Polynomial
from utils.errors import KellerToolError, MapParseError
from utils.validators import MapFileValidator

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class MapFile:
    """Codec between map documents and PolyMap."""

    @staticmethod
    def _position(text: str, pattern: str, occurrence: int = 0) -> Tuple[int, int]:
        """Line and column (1-based) of the n-th match of ``pattern``."""
        for k, match in enumerate(re.finditer(pattern, text)):
            if k == occurrence:
                offset = match.start()
                line = text.count("\n", 0, offset) + 1
                column = offset - (text.rfind("\n", 0, offset) + 1) + 1
                return line, column
        return 1, 1

    @staticmethod
    def _fail(text: str, error: KellerToolError, pattern: str, occurrence: int = 0) -> MapParseError:
        line, column = MapFile._position(text, pattern, occurrence)
        return MapParseError(error.message, line, column)

    @staticmethod
    def loads(text: str) -> PolyMap:
        """Parse a map document.

        Args:
            text: JSON text of the document

        Returns:
            The vertex as a PolyMap

        Raises:
            MapParseError: On malformed JSON or any invalid field, with the
                line and column of the offending field
        """
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise MapParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno)
        if not isinstance(document, dict):
            raise MapParseError("document must be a JSON object", 1, 1)
        for key in ("n", "components"):
            if key not in document:
                raise MapParseError(f"missing required field \"{key}\"", 1, 1)

        try:
            n = MapFileValidator.validate_dimension(document["n"])
        except MapParseError as e:
            raise MapFile._fail(text, e, r'"n"\s*:')
        declared: Optional[int] = None
        if document.get("d") is not None:
            try:
                declared = MapFileValidator.validate_degree(document["d"])
            except MapParseError as e:
                raise MapFile._fail(text, e, r'"d"\s*:')
        try:
            MapFileValidator.validate_components(document["components"], n)
        except MapParseError as e:
            raise MapFile._fail(text, e, r'"components"\s*:')

        components = []
        term_number = 0
        for terms in document["components"]:
            collected: Dict[Tuple[int, ...], Any] = {}
            for term in terms:
                try:
                    MapFileValidator.validate_term(term)
                    exps = tuple(MapFileValidator.validate_exponents(term["exps"], n))
                    coeff = MapFileValidator.validate_coefficient(term["coeff"])
                    if declared is not None and sum(exps) > declared:
                        raise MapParseError(
                            f"monomial of degree {sum(exps)} exceeds declared degree {declared}")
                except MapParseError as e:
                    raise MapFile._fail(text, e, r'"exps"\s*:', term_number)
                collected[exps] = collected.get(exps, 0) + coeff
                term_number += 1
            components.append(Polynomial(n, collected))
        try:
            return PolyMap(components, declared)
        except KellerToolError as e:
            raise MapParseError(e.message, 1, 1)

    @staticmethod
    def decode(data: bytes) -> str:
        """UTF-8 text of a map file.

        Raises:
            MapParseError: At the line and column of the first invalid byte
        """
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as e:
            valid = data[:e.start].decode("utf-8")
            line = valid.count("\n") + 1
            column = len(valid) - (valid.rfind("\n") + 1) + 1
            raise MapParseError(f"invalid UTF-8 byte 0x{data[e.start]:02x}", line, column)

    @staticmethod
    def read(path: PathLike) -> str:
        logger.debug("reading map file %s", path)
        return MapFile.decode(Path(path).read_bytes())

    @staticmethod
    def load(path: PathLike) -> PolyMap:
        return MapFile.loads(MapFile.read(path))

    @staticmethod
    def dumps(vertex: PolyMap) -> str:
        """Canonical text: sorted keys, terms in descending graded-lex order."""
        return MapFile.dumps_document(vertex.to_dict())

    @staticmethod
    def dump(vertex: PolyMap, path: PathLike) -> Path:
        target = Path(path)
        target.write_text(MapFile.dumps(vertex), encoding="utf-8")
        logger.info("wrote map file %s", target)
        return target

    @staticmethod
    def dumps_document(document: Any) -> str:
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def dump_document(document: Any, path: PathLike) -> Path:
        target = Path(path)
        target.write_text(MapFile.dumps_document(document), encoding="utf-8")
        return target

    @staticmethod
    def digest(text: str) -> str:
        """sha256 of the input text, identifying the run's input."""
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
