"""
Input documents and the text form of index-set data.

Documents are JSON. Spaces, maps, categories, groupoids, sheaves and
instance descriptors each have a loader; the text grammar covers UPSets,
maps between index sets, families and ultrafilter expressions.
"""
from __future__ import annotations

import json

from .category import FiniteCategory
from .descent import TopGroupoid
from .exceptions import ParseError, UltrakitException
from .maps import IndexSet, ResidueMap, StepMap, TableMap, UPFamily
from .sheaf import UltraSheaf
from .space import SpaceMap, space_validate
from .ultrafilter import FactorialUF, Principal, Pushforward, Sum, SumEncoding, as_family, encoding_for
from .upset import UPSet
from .vult import Alex, FinSetVUlt, PointVUlt, PtSpace


# JSON documents


def read_document(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def dump_document(data):
    return json.dumps(data, sort_keys=True, default=str)


def _field(data, key):
    try:
        return data[key]
    except (KeyError, TypeError):
        raise ParseError(f"document is missing {key!r}") from None


def load_space(data):
    return space_validate(_field(data, 'points'), _field(data, 'opens'))


def load_map(data):
    try:
        return SpaceMap(load_space(_field(data, 'source')), load_space(_field(data, 'target')), tuple(_field(data, 'map')))
    except TypeError:
        raise ParseError("map images must be a list of points") from None


def load_category(data):
    _field(data, 'objects')
    _field(data, 'arrows')
    return FiniteCategory.from_document(data)


def load_groupoid(data):
    return TopGroupoid(
        load_space(_field(data, 'objects')), load_space(_field(data, 'arrows')),
        tuple(_field(data, 'source')), tuple(_field(data, 'target')), tuple(_field(data, 'unit')),
        tuple(_field(data, 'inverse')), {(g, f): h for g, f, h in _field(data, 'multiply')},
    ).validate()


def load_sheaf(data):
    base = PtSpace(load_space(_field(data, 'base')))
    _field(data, 'fibers')
    try:
        return UltraSheaf.from_document(base, data)
    except KeyError as e:
        raise ParseError(f"no action given along {e.args[0]}") from None


def load_instance(data):
    """A tagged instance descriptor: point, finset, space or alex."""
    kind = _field(data, 'kind')
    if kind == "point":
        return PointVUlt()
    if kind == "finset":
        return FinSetVUlt(_field(data, 'bound'))
    if kind == "space":
        return PtSpace(load_space(_field(data, 'space')))
    if kind == "alex":
        return Alex(load_category(_field(data, 'category')))
    raise ParseError(f"unknown instance kind {kind!r}")


# Text grammar


class TextParser:
    """
    Recursive-descent parser over the text forms the library writes:

        upset   := "prefix:" bits ";period:" bits
        index   := "fin(" int ")" | "nat"
        map     := "table(" index ";" ints ")" | "step(" index ";" pieces ")"
                 | "affine(" int "," int ")" | "residue(" int (";" int "," int)+ ")"
        family  := "family(" index ";" value "=" upset ("|" value "=" upset)* ")"
        uf      := "principal(" index "," int ")" | "factorial" | "push(" uf "," map ")"
                 | "sum(" uf "," ("[" uf ("," uf)* "]" | "section(" map ")" | family) ")"
    """
    __slots__ = ("text", "pos")

    def __init__(self, text):
        self.text = text
        self.pos = 0

    # Positions and tokens

    def location(self):
        consumed = self.text[:self.pos]
        line = consumed.count("\n") + 1
        column = self.pos - (consumed.rfind("\n") + 1) + 1
        return line, column

    def error(self, message):
        return ParseError(message, *self.location())

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, literal):
        self.skip_space()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal):
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal):
        if not self.accept(literal):
            found = self.text[self.pos:self.pos + 8] or "end of input"
            raise self.error(f"expected {literal!r}, found {found!r}")

    def integer(self):
        self.skip_space()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.text[start:self.pos] in ("", "-"):
            self.pos = start
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def bits(self, allow_empty):
        self.skip_space()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "01":
            self.pos += 1
        if not allow_empty and start == self.pos:
            raise self.error("expected at least one bit")
        return tuple(int(b) for b in self.text[start:self.pos])

    def end(self):
        self.skip_space()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")

    # Productions

    def upset(self):
        self.expect("prefix:")
        prefix = self.bits(allow_empty=True)
        self.expect(";")
        self.expect("period:")
        return UPSet(prefix, self.bits(allow_empty=False))

    def index(self):
        if self.accept("nat"):
            return IndexSet.nat()
        self.expect("fin(")
        size = self.integer()
        self.expect(")")
        return IndexSet.fin(size)

    def pieces(self, value):
        pieces = [self._piece(value)]
        while self.accept("|"):
            pieces.append(self._piece(value))
        return pieces

    def _piece(self, value):
        v = value()
        self.expect("=")
        return v, self.upset()

    def family(self, value=None):
        value = value or self.integer
        self.expect("family(")
        index = self.index()
        self.expect(";")
        pieces = self.pieces(value)
        self.expect(")")
        try:
            return UPFamily.build(index, pieces)
        except (ValueError, UltrakitException) as e:
            raise self.error(f"not a family: {e}") from None

    def upmap(self):
        try:
            return self._upmap()
        except ParseError:
            raise
        except (ValueError, UltrakitException) as e:
            raise self.error(f"not a map: {e}") from None

    def _upmap(self):
        if self.accept("table("):
            codomain = self.index()
            self.expect(";")
            values = [self.integer()]
            while self.accept(","):
                values.append(self.integer())
            self.expect(")")
            return TableMap(IndexSet.fin(len(values)), codomain, tuple(values))
        if self.accept("step("):
            codomain = self.index()
            self.expect(";")
            pieces = self.pieces(self.integer)
            self.expect(")")
            return StepMap(IndexSet.nat(), codomain, UPFamily.build(IndexSet.nat(), pieces))
        if self.accept("affine("):
            a = self.integer()
            self.expect(",")
            b = self.integer()
            self.expect(")")
            return ResidueMap.affine(a, b)
        self.expect("residue(")
        modulus = self.integer()
        pieces = []
        while self.accept(";"):
            a = self.integer()
            self.expect(",")
            pieces.append((a, self.integer()))
        self.expect(")")
        return ResidueMap(modulus, tuple(pieces))

    def ultrafilter(self):
        try:
            return self._ultrafilter()
        except ParseError:
            raise
        except (ValueError, UltrakitException) as e:
            raise self.error(f"not an ultrafilter: {e}") from None

    def _ultrafilter(self):
        if self.accept("factorial"):
            return FactorialUF()
        if self.accept("principal("):
            index = self.index()
            self.expect(",")
            point = self.integer()
            self.expect(")")
            return Principal(index, point)
        if self.accept("push("):
            base = self.ultrafilter()
            self.expect(",")
            f = self.upmap()
            self.expect(")")
            return Pushforward(base, f)
        self.expect("sum(")
        base = self.ultrafilter()
        self.expect(",")
        if self.accept("section("):
            section = self.upmap()
            self.expect(")")
            self.expect(")")
            return Sum(base, None, SumEncoding.graph(section))
        if self.accept("["):
            values = [self.ultrafilter()]
            while self.accept(","):
                values.append(self.ultrafilter())
            self.expect("]")
            family = UPFamily.from_list(values)
        else:
            family = self.family(self.ultrafilter)
        self.expect(")")
        family = as_family(base, family)
        return Sum(base, family, encoding_for(base, family))


def _parse(text, production):
    parser = TextParser(text)
    value = production(parser)
    parser.end()
    return value


def parse_upset(text):
    return _parse(text, TextParser.upset)


def parse_index(text):
    return _parse(text, TextParser.index)


def parse_map(text):
    return _parse(text, TextParser.upmap)


def parse_family(text):
    return _parse(text, TextParser.family)


def parse_ultrafilter(text):
    return _parse(text, TextParser.ultrafilter)
