"""Canonical source formatter: deterministic 4-space layout, idempotent.

Doc comments are reproduced verbatim at their attachment points; regular
comments are re-attached at declaration/statement granularity (own-line
comments stay on their own line, trailing comments stay on their line).
"""

from __future__ import annotations

from bisect import bisect_right

from . import ast
from .ast import expr_text, type_text
from .tokens import DocComment


def format_source(sf: ast.SourceFile) -> str:
    return _Fmt(sf).run()


class _Fmt:
    def __init__(self, sf: ast.SourceFile):
        self.sf = sf
        self.out: list[str] = []
        self.indent = 0
        self.comments = sorted(sf.comments, key=lambda c: c.span.byte_start)
        self.used = [False] * len(self.comments)
        self.newlines = [i for i, ch in enumerate(sf.text) if ch == "\n"]

    def line_of(self, byte: int) -> int:
        return bisect_right(self.newlines, byte - 1) + 1

    def put(self, text: str) -> None:
        self.out.append("    " * self.indent + text if text else "")

    # -- comment weaving --

    def leading(self, byte: int) -> None:
        for i, c in enumerate(self.comments):
            if c.span.byte_start >= byte:
                break
            if not self.used[i]:
                self.used[i] = True
                self.put(c.text)

    def trailing(self, span) -> None:
        if span is None or span.byte_end == 0:
            return
        line = self.line_of(span.byte_end - 1)
        for i, c in enumerate(self.comments):
            if not self.used[i] and not c.own_line and c.span.line == line:
                self.used[i] = True
                if self.out:
                    self.out[-1] += " " + c.text
                return

    def flush_comments(self) -> None:
        for i, c in enumerate(self.comments):
            if not self.used[i]:
                self.used[i] = True
                self.put(c.text)

    # -- doc comments --

    def doc_lines(self, doc: DocComment) -> None:
        for text in doc.text.split("\n"):
            self.put(f"/// {text}" if text else "///")

    def anchor(self, node_span, doc: DocComment | None) -> int:
        if doc is not None and not doc.trailing and node_span is not None:
            return min(node_span.byte_start, doc.span.byte_start)
        return node_span.byte_start if node_span is not None else 0

    # -- top level --

    def run(self) -> str:
        for i, item in enumerate(self.sf.items):
            if i:
                self.put("")
            self.emit_item(item)
        for doc in self.sf.orphan_docs:
            self.doc_lines(doc)
        self.flush_comments()
        return "\n".join(self.out) + "\n" if self.out else ""

    def emit_item(self, item) -> None:
        self.leading(self.anchor(item.span, item.doc))
        if item.doc is not None and not item.doc.trailing:
            self.doc_lines(item.doc)
        if isinstance(item, ast.ModuleDecl):
            self.emit_module(item)
        else:
            self.emit_package(item)
        self.trailing(item.span)

    def emit_module(self, m: ast.ModuleDecl) -> None:
        head = "pub module " if m.is_pub else "module "
        head += m.name
        if m.generic_params:
            head += "::<" + ", ".join(m.generic_params) + ">"
        if m.params:
            self.put(head + " #(")
            self.indent += 1
            for p in m.params:
                self.emit_param(p)
            self.indent -= 1
            head = ")"
        if m.ports:
            self.put(head + " (")
            self.indent += 1
            for p in m.ports:
                self.emit_port(p)
            self.indent -= 1
            self.put(") {")
        else:
            self.put(head + " () {")
        self.indent += 1
        for it in m.body:
            self.emit_module_item(it)
        self.indent -= 1
        self.put("}")

    def emit_param(self, p: ast.ParamDecl) -> None:
        self.leading(self.anchor(p.name_span, p.doc))
        if p.doc is not None and not p.doc.trailing:
            self.doc_lines(p.doc)
        text = f"param {p.name}: {type_text(p.ty)} = {expr_text(p.default)},"
        if p.doc is not None and p.doc.trailing:
            text += f" /// {p.doc.text}"
        self.put(text)
        self.trailing(p.name_span)

    def emit_port(self, p: ast.PortDecl) -> None:
        self.leading(self.anchor(p.name_span, p.doc))
        if p.doc is not None and not p.doc.trailing:
            self.doc_lines(p.doc)
        dom = f"`{p.domain} " if p.domain else ""
        text = f"{p.name}: {p.direction} {dom}{type_text(p.ty)},"
        if p.doc is not None and p.doc.trailing:
            text += f" /// {p.doc.text}"
        self.put(text)
        self.trailing(p.name_span)

    def emit_package(self, pkg: ast.PackageDecl) -> None:
        head = "pub package " if pkg.is_pub else "package "
        self.put(head + pkg.name + " {")
        self.indent += 1
        for it in pkg.items:
            self.emit_module_item(it)
        self.indent -= 1
        self.put("}")

    # -- module items --

    def emit_module_item(self, it) -> None:
        doc = getattr(it, "doc", None)
        self.leading(self.anchor(it.span, doc))
        if doc is not None and not doc.trailing:
            self.doc_lines(doc)
        if isinstance(it, ast.VarDecl):
            dom = f"`{it.domain} " if it.domain else ""
            self.put(f"var {it.name}: {dom}{type_text(it.ty)};" + self._trail_doc(doc))
        elif isinstance(it, ast.ConstDecl):
            self.put(f"const {it.name}: {type_text(it.ty)} = {expr_text(it.value)};" + self._trail_doc(doc))
        elif isinstance(it, ast.InstDecl):
            self.emit_inst(it, doc)
        elif isinstance(it, ast.AssignItem):
            self.put(f"assign {expr_text(it.lvalue)} = {expr_text(it.rhs)};")
        elif isinstance(it, ast.AlwaysFf):
            head = "always_ff"
            if it.clock_name:
                names = it.clock_name + (f", {it.reset_name}" if it.reset_name else "")
                head += f" ({names})"
            self.put(head + " {")
            self.emit_stmts(it.body.stmts)
            self.put("}")
        elif isinstance(it, ast.AlwaysComb):
            self.put("always_comb {")
            self.emit_stmts(it.body.stmts)
            self.put("}")
        elif isinstance(it, ast.FunctionDecl):
            args = ", ".join(f"{a.name}: {type_text(a.ty)}" for a in it.args)
            self.put(f"function {it.name} ({args}) -> {type_text(it.ret)} {{")
            self.emit_stmts(it.body.stmts)
            self.put("}")
        elif isinstance(it, ast.UnsafeCdcItem):
            self.put("unsafe (cdc) {")
            self.indent += 1
            for sub in it.items:
                self.emit_module_item(sub)
            self.indent -= 1
            self.put("}")
        else:
            raise TypeError(f"unexpected module item {it!r}")
        self.trailing(it.span)

    def _trail_doc(self, doc: DocComment | None) -> str:
        if doc is not None and doc.trailing:
            return f" /// {doc.text}"
        return ""

    def emit_inst(self, it: ast.InstDecl, doc) -> None:
        head = f"inst {it.name}: {it.target.text}"
        if it.generic_args:
            head += "::<" + ", ".join(g.text for g in it.generic_args) + ">"
        if not it.param_conns and not it.port_conns:
            self.put(head + ";" + self._trail_doc(doc))
            return
        if it.param_conns:
            self.put(head + " #(")
            self.indent += 1
            for c in it.param_conns:
                self.put(f"{c.name}: {expr_text(c.expr)},")
            self.indent -= 1
            head = ")"
        if it.port_conns:
            self.put(head + " (")
            self.indent += 1
            for c in it.port_conns:
                self.put(f"{c.name}: {expr_text(c.expr)},")
            self.indent -= 1
            self.put(");")
        else:
            self.put(head + ";")

    # -- statements --

    def emit_stmts(self, stmts) -> None:
        self.indent += 1
        for s in stmts:
            self.emit_stmt(s)
        self.indent -= 1

    def emit_stmt(self, s) -> None:
        self.leading(s.span.byte_start)
        if isinstance(s, ast.AssignStmt):
            self.put(f"{expr_text(s.lvalue)} {s.op} {expr_text(s.rhs)};")
        elif isinstance(s, ast.IfStmt):
            self.emit_if(s, f"if {expr_text(s.cond)} {{")
        elif isinstance(s, ast.IfResetStmt):
            self.emit_if(s, "if_reset {")
        elif isinstance(s, ast.ReturnStmt):
            self.put(f"return {expr_text(s.value)};")
        elif isinstance(s, ast.UnsafeCdcStmt):
            self.put("unsafe (cdc) {")
            self.emit_stmts(s.body.stmts)
            self.put("}")
        elif isinstance(s, ast.Block):
            self.put("{")
            self.emit_stmts(s.stmts)
            self.put("}")
        else:
            raise TypeError(f"unexpected statement {s!r}")
        self.trailing(s.span)

    def emit_if(self, s, head: str) -> None:
        self.put(head)
        self.emit_stmts(s.then.stmts)
        node = s.orelse
        while node is not None:
            if isinstance(node, ast.IfStmt):
                self.put(f"}} else if {expr_text(node.cond)} {{")
                self.emit_stmts(node.then.stmts)
                node = node.orelse
            else:
                self.put("} else {")
                self.emit_stmts(node.stmts)
                node = None
        self.put("}")
