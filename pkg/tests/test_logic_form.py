import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symdiag import logic_form as lform
from symdiag.errors import (
    LogicArityError,
    LogicFormError,
    LogicReferenceError,
    LogicSyntaxError,
    LogicValidationError,
)
from symdiag.logic_form import (
    CircleTerm,
    IndicatorDecl,
    LineDecl,
    LineTerm,
    LogicForm,
    PointDecl,
    PointTerm,
    RelationDecl,
    ShapeDecl,
    canonicalize,
    parse,
    serialize,
    validate,
)


class TestParse:
    def test_minimal_program(self):
        lf = parse("Point(a, 0.1, 0.2)\nPoint(b, 0.9, 0.2)\nLine(ab)")
        assert len(lf.points) == 2
        assert len(lf.lines) == 1
        assert lf.lines[0] == LineDecl("a", "b")
        assert lf.point_map()["a"] == (0.1, 0.2)

    def test_line_without_points_is_reference_error(self):
        with pytest.raises(LogicReferenceError) as exc:
            parse("Line(ab)")
        assert "a" in str(exc.value)

    def test_relation_term_from_paper_style_input(self):
        src = (
            "Point(a, 0.1, 0.1)\n"
            "Point(b, 0.9, 0.1)\n"
            "Point(n, 0.5, 0.1)\n"
            "Line(ab)\n"
            "Relation(PointLiesOnLine(n, Line(a,b)))\n"
        )
        lf = parse(src)
        rel = lf.relations[0]
        assert rel.kind == "PointLiesOnLine"
        assert rel.args == (PointTerm("n"), LineTerm("a", "b"))

    def test_bare_relation_call_accepted(self):
        src = "Point(a, 0, 0)\nPoint(b, 1, 0)\nPoint(n, 0.5, 0)\nPointLiesOnLine(n, Line(ab))"
        lf = parse(src)
        assert lf.relations[0].kind == "PointLiesOnLine"

    def test_comments_and_blank_lines(self):
        lf = parse("# header\n\nPoint(a, 0.5, 0.5)  # trailing\n")
        assert len(lf.points) == 1

    def test_forward_reference_allowed(self):
        lf = parse("Line(ab)\nPoint(a, 0, 0)\nPoint(b, 1, 1)")
        assert len(lf.lines) == 1

    def test_uppercase_names_folded(self):
        lf = parse("Point(A, 0.2, 0.3)")
        assert lf.points[0].name == "a"

    def test_syntax_error_reports_position(self):
        with pytest.raises(LogicSyntaxError) as exc:
            parse("Point(a, 0.1, 0.2)\nPoint(b 0.3, 0.4)")
        assert exc.value.line == 2

    def test_unknown_declaration(self):
        with pytest.raises(LogicSyntaxError):
            parse("Blob(a, 0.1, 0.2)")

    def test_shape_arity_error(self):
        with pytest.raises(LogicArityError):
            parse("Point(a, 0, 0)\nPoint(b, 1, 0)\nShape(Triangle(a, b))")

    def test_coordinate_out_of_range(self):
        with pytest.raises(LogicValidationError):
            parse("Point(a, 1.5, 0.2)")

    def test_too_many_fractional_digits(self):
        with pytest.raises(LogicSyntaxError):
            parse("Point(a, 0.1234567, 0.2)")

    def test_six_fractional_digits_quantized(self):
        lf = parse("Point(a, 0.123456, 0.2)")
        assert lf.points[0].x == 0.1235

    def test_duplicate_point_collapses_with_warning(self):
        warnings: list[str] = []
        lf = parse("Point(a, 0.1, 0.2)\nPoint(a, 0.1, 0.2)", collect_warnings=warnings)
        assert len(lf.points) == 1
        assert any("duplicate" in w for w in warnings)

    def test_conflicting_point_redeclaration_rejected(self):
        with pytest.raises(LogicValidationError):
            parse("Point(a, 0.1, 0.2)\nPoint(a, 0.3, 0.2)")

    def test_multichar_names_in_line_pair(self):
        lf = parse("Point(a1, 0, 0)\nPoint(b1, 1, 0)\nLine(a1b1)")
        assert lf.lines[0] == LineDecl("a1", "b1")

    def test_self_loop_line_rejected(self):
        with pytest.raises(LogicFormError):
            parse("Point(a, 0, 0)\nLine(a, a)")

    def test_circle_with_radius(self):
        lf = parse("Point(o, 0.5, 0.5)\nShape(Circle(o, 0.4))")
        assert lf.shapes[0].radius == 0.4

    def test_indicator_requires_declared_shape(self):
        src = "Point(a,0,0)\nPoint(b,1,0)\nPoint(c,0,1)\nIndicator(Triangle(a,b,c), RightAngle(a))"
        with pytest.raises(LogicValidationError):
            parse(src)

    def test_indicator_side_must_belong_to_shape(self):
        src = (
            "Point(a,0,0)\nPoint(b,1,0)\nPoint(c,0,1)\nPoint(d,1,1)\n"
            "Shape(Triangle(a,b,c))\n"
            "Indicator(Triangle(a,b,c), Equals(ab, ad))"
        )
        with pytest.raises(LogicFormError):
            parse(src)

    def test_relation_arity_error(self):
        with pytest.raises(LogicArityError):
            parse("Point(a,0,0)\nPoint(b,1,0)\nRelation(PointLiesOnLine(a))")

    def test_concyclic_needs_three_points(self):
        with pytest.raises(LogicArityError):
            parse("Point(a,0,0)\nPoint(b,1,0)\nRelation(ConcyclicPoints(a, b))")

    def test_garbage_raises_logic_form_error(self):
        for bad in ["(((", "Point", "Point(", "Point(a,,)", "42", "Line[ab]", "\x00\x01"]:
            with pytest.raises(LogicFormError):
                parse(bad)


class TestSerialize:
    def test_round_trip_on_source(self):
        src = (
            "Point(a, 0.1, 0.2)\n"
            "Point(b, 0.9, 0.2)\n"
            "Point(c, 0.5, 0.8)\n"
            "Line(ab)\nLine(bc)\n"
            "Shape(Triangle(a, b, c))\n"
            "Indicator(Triangle(a, b, c), Equals(ab, bc))\n"
            "Relation(PointLiesOnLine(a, Line(b, c)))\n"
        )
        lf = parse(src)
        assert parse(serialize(lf)) == lf

    def test_line_canonical_order(self):
        lf = LogicForm(
            points=(PointDecl("a", 0, 0), PointDecl("b", 1, 1)),
            lines=(LineDecl("b", "a"),),
        )
        assert "Line(ab)" in serialize(lf)

    def test_empty_form_serializes_empty(self):
        assert serialize(LogicForm()) == ""

    def test_points_keep_declaration_order(self):
        lf = parse("Point(b, 0.1, 0.1)\nPoint(a, 0.2, 0.2)")
        text = serialize(lf)
        assert text.index("Point(b") < text.index("Point(a")

    def test_lines_sorted_lexicographically(self):
        src = "Point(a,0,0)\nPoint(b,1,0)\nPoint(c,1,1)\nLine(bc)\nLine(ab)"
        text = serialize(parse(src))
        assert text.index("Line(ab)") < text.index("Line(bc)")

    def test_coordinates_emit_four_digits(self):
        text = serialize(parse("Point(a, 0.5, 0.25)"))
        assert "Point(a, 0.5000, 0.2500)" in text

    def test_multichar_line_uses_commas(self):
        lf = parse("Point(a1, 0, 0)\nPoint(b1, 1, 0)\nLine(a1b1)")
        text = serialize(lf)
        assert "Line(a1, b1)" in text
        assert parse(text) == lf


class TestCanonicalize:
    def test_dedupes_lines(self):
        lf = LogicForm(
            points=(PointDecl("a", 0, 0), PointDecl("b", 1, 1)),
            lines=(LineDecl("a", "b"), LineDecl("b", "a")),
        )
        assert len(canonicalize(lf).lines) == 1

    def test_idempotent(self):
        src = "Point(a, 0.1, 0.2)\nPoint(b, 0.9, 0.2)\nLine(ab)\nShape(Circle(a))"
        lf = canonicalize(parse(src))
        assert canonicalize(lf) == lf

    def test_preserves_coordinates_and_vertex_order(self):
        lf = parse(
            "Point(a,0.1,0.2)\nPoint(b,0.3,0.4)\nPoint(c,0.5,0.6)\nPoint(d,0.7,0.8)\n"
            "Shape(Square(d, c, b, a))"
        )
        out = canonicalize(lf)
        assert out.shapes[0].vertices == ("d", "c", "b", "a")
        assert out.point_map() == lf.point_map()


class TestStructuralForm:
    def test_dict_round_trip(self):
        src = (
            "Point(o, 0.5, 0.5)\nPoint(p, 0.5, 0.9)\n"
            "Shape(Circle(o))\n"
            "Relation(PointLiesOnCircle(p, Circle(o, 0.4)))\n"
        )
        lf = parse(src)
        assert lform.from_dict(lform.to_dict(lf)) == lf


class TestValidate:
    def test_right_triangle_without_indicator_warns(self):
        lf = parse("Point(a,0,0)\nPoint(b,0.4,0)\nPoint(c,0,0.3)\nShape(RightTriangle(a,b,c))")
        warnings = validate(lf)
        assert any("RightTriangle" in w for w in warnings)

    def test_right_triangle_with_indicator_clean(self):
        lf = parse(
            "Point(a,0,0)\nPoint(b,0.4,0)\nPoint(c,0,0.3)\n"
            "Shape(RightTriangle(a,b,c))\n"
            "Indicator(RightTriangle(a,b,c), RightAngle(a))"
        )
        assert not any("RightTriangle" in w for w in validate(lf))


_NAMES = st.sampled_from("abcdefghij")


@st.composite
def logic_forms(draw):
    names = draw(st.sets(_NAMES, min_size=1, max_size=6))
    names = sorted(names)
    coords = st.integers(min_value=0, max_value=10000).map(lambda v: v / 10000.0)
    points = tuple(PointDecl(n, draw(coords), draw(coords)) for n in names)
    line_pairs = draw(
        st.sets(
            st.tuples(st.sampled_from(names), st.sampled_from(names)).filter(
                lambda ab: ab[0] != ab[1]
            ),
            max_size=5,
        )
    )
    lines = tuple({LineDecl(a, b) for a, b in line_pairs})
    shapes = []
    if len(names) >= 3 and draw(st.booleans()):
        shapes.append(ShapeDecl("Triangle", tuple(draw(st.permutations(names))[:3])))
    if draw(st.booleans()):
        shapes.append(ShapeDecl("Circle", (names[0],), draw(st.none() | coords.filter(lambda r: r > 0))))
    relations = []
    if lines and draw(st.booleans()):
        line = next(iter(lines))
        relations.append(RelationDecl("PointLiesOnLine", (PointTerm(names[0]), LineTerm(line.a, line.b))))
    return LogicForm(points, lines, tuple(shapes), (), tuple(relations))


class TestProperties:
    @given(logic_forms())
    @settings(max_examples=200, deadline=None)
    def test_round_trip_identity(self, lf):
        assert parse(serialize(lf)) == lf

    @given(logic_forms())
    @settings(max_examples=100, deadline=None)
    def test_canonicalize_idempotent(self, lf):
        once = canonicalize(lf)
        assert canonicalize(once) == once

    @given(st.text(max_size=80))
    @settings(max_examples=300, deadline=None)
    def test_parser_never_crashes_unhandled(self, text):
        try:
            parse(text)
        except LogicFormError:
            pass
