"""Symbol tables across project and dependency namespaces, path resolution,
and monomorphization of generic modules."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum, auto

from . import ast
from .diagnostics import Diagnostic, Related
from .tokens import Span


class SymbolKind(Enum):
    MODULE = auto()
    PACKAGE = auto()
    PARAM = auto()
    CONST = auto()
    PORT = auto()
    VAR = auto()
    INST = auto()
    FUNCTION = auto()
    GENERIC_PARAM = auto()
    NAMESPACE = auto()


@dataclass
class Symbol:
    name: str
    kind: SymbolKind
    span: Span
    unit: str
    decl: object = None
    ty: ast.TypeSpec | None = None
    is_pub: bool = True

    @property
    def kind_name(self) -> str:
        return self.kind.name.lower().replace("_", " ")


class Scope:
    def __init__(self, parent: "Scope | None" = None):
        self.parent = parent
        self.entries: dict[str, Symbol] = {}

    def declare(self, sym: Symbol) -> Symbol | None:
        """Add `sym`; returns the previous symbol if the name is taken."""
        existing = self.entries.get(sym.name)
        if existing is None:
            self.entries[sym.name] = sym
        return existing

    def lookup(self, name: str) -> Symbol | None:
        scope: Scope | None = self
        while scope is not None:
            sym = scope.entries.get(name)
            if sym is not None:
                return sym
            scope = scope.parent
        return None


@dataclass
class SymbolTable:
    unit: str
    project: Scope
    module_scopes: dict[int, Scope] = field(default_factory=dict)
    package_scopes: dict[int, Scope] = field(default_factory=dict)
    function_scopes: dict[int, Scope] = field(default_factory=dict)


@dataclass
class ResolvedPath:
    segments: list[str]
    target: Symbol
    namespace_root: str | None = None  # None = local, else dependency project name


def build_symbols(
    files: list[ast.SourceFile],
    dependency_namespaces: dict[str, SymbolTable] | None = None,
    unit: str = "local",
) -> tuple[SymbolTable, list[Diagnostic]]:
    """Index every declaration; duplicates in one scope are E0201 (first wins)."""
    diags: list[Diagnostic] = []
    project = Scope()
    table = SymbolTable(unit, project)
    for dep_name in sorted(dependency_namespaces or {}):
        project.declare(Symbol(dep_name, SymbolKind.NAMESPACE, Span(dep_name, 0, 0, 1, 1), dep_name, decl=dependency_namespaces[dep_name]))

    def declare(scope: Scope, sym: Symbol) -> None:
        existing = scope.declare(sym)
        if existing is not None:
            diags.append(
                Diagnostic(
                    "E0201",
                    f"duplicate identifier `{sym.name}`",
                    sym.span,
                    [Related("first declared here", existing.span)],
                )
            )

    ordered = sorted(files, key=lambda f: f.file_id)
    for sf in ordered:
        for item in sf.items:
            kind = SymbolKind.MODULE if isinstance(item, ast.ModuleDecl) else SymbolKind.PACKAGE
            declare(project, Symbol(item.name, kind, item.name_span, unit, decl=item, is_pub=item.is_pub))

    for sf in ordered:
        for item in sf.items:
            if isinstance(item, ast.ModuleDecl):
                _index_module(table, project, item, unit, declare)
            else:
                _index_package(table, project, item, unit, declare)
    return table, diags


def _index_module(table, project, m: ast.ModuleDecl, unit, declare) -> None:
    scope = Scope(project)
    table.module_scopes[id(m)] = scope
    for gp in m.generic_params:
        declare(scope, Symbol(gp, SymbolKind.GENERIC_PARAM, m.name_span, unit))
    for p in m.params:
        declare(scope, Symbol(p.name, SymbolKind.PARAM, p.name_span, unit, decl=p, ty=p.ty))
    for p in m.ports:
        declare(scope, Symbol(p.name, SymbolKind.PORT, p.name_span, unit, decl=p, ty=p.ty))
    for it, _ in ast.iter_module_items(m.body):
        if isinstance(it, ast.VarDecl):
            declare(scope, Symbol(it.name, SymbolKind.VAR, it.name_span, unit, decl=it, ty=it.ty))
        elif isinstance(it, ast.ConstDecl):
            declare(scope, Symbol(it.name, SymbolKind.CONST, it.name_span, unit, decl=it, ty=it.ty))
        elif isinstance(it, ast.InstDecl):
            declare(scope, Symbol(it.name, SymbolKind.INST, it.name_span, unit, decl=it))
        elif isinstance(it, ast.FunctionDecl):
            declare(scope, Symbol(it.name, SymbolKind.FUNCTION, it.name_span, unit, decl=it))
            fscope = Scope(scope)
            table.function_scopes[id(it)] = fscope
            for a in it.args:
                declare(fscope, Symbol(a.name, SymbolKind.VAR, a.name_span, unit, decl=a, ty=a.ty))


def _index_package(table, project, pkg: ast.PackageDecl, unit, declare) -> None:
    scope = Scope(project)
    table.package_scopes[id(pkg)] = scope
    for it in pkg.items:
        if isinstance(it, ast.ConstDecl):
            declare(scope, Symbol(it.name, SymbolKind.CONST, it.name_span, unit, decl=it, ty=it.ty))
        else:
            declare(scope, Symbol(it.name, SymbolKind.FUNCTION, it.name_span, unit, decl=it))
            fscope = Scope(scope)
            table.function_scopes[id(it)] = fscope
            for a in it.args:
                declare(fscope, Symbol(a.name, SymbolKind.VAR, a.name_span, unit, decl=a, ty=a.ty))


def resolve(path: ast.PathExpr, scope: Scope, table: SymbolTable, diags: list[Diagnostic]) -> ResolvedPath | None:
    """Innermost-scope-first lookup; the first segment may name a dependency."""
    sym = scope.lookup(path.segments[0])
    if sym is None:
        diags.append(Diagnostic("E0202", f"undefined identifier `{path.segments[0]}`", path.span))
        return None
    root: str | None = None
    current_table = table
    for seg in path.segments[1:]:
        if sym.kind == SymbolKind.NAMESPACE:
            dep_table: SymbolTable = sym.decl
            root = sym.name
            member = dep_table.project.entries.get(seg)
            if member is None or not member.is_pub:
                diags.append(Diagnostic("E0202", f"dependency `{sym.name}` has no public item `{seg}`", path.span))
                return None
            current_table = dep_table
            sym = member
        elif sym.kind == SymbolKind.PACKAGE:
            pkg_scope = current_table.package_scopes.get(id(sym.decl))
            member = pkg_scope.entries.get(seg) if pkg_scope else None
            if member is None:
                diags.append(Diagnostic("E0202", f"package `{sym.name}` has no item `{seg}`", path.span))
                return None
            sym = member
        else:
            diags.append(
                Diagnostic("E0203", f"`{sym.name}` is a {sym.kind_name} and has no member `{seg}`", path.span)
            )
            return None
    return ResolvedPath(list(path.segments), sym, root)


# -- monomorphization --------------------------------------------------------


@dataclass
class GenericInstance:
    template: ast.ModuleDecl
    args: tuple[str, ...]  # display paths of the argument modules
    mangled_name: str
    unit: str
    file_id: str


@dataclass
class UnitView:
    name: str
    files: list[ast.SourceFile]
    table: SymbolTable


@dataclass
class MonoResult:
    # Emission-ready items per (unit, file): concrete modules and packages in
    # source order, with monomorphized instances in place of their templates.
    items: dict[tuple[str, str], list[ast.Item]]
    instances: list[GenericInstance]
    name_map: dict[str, dict]
    diagnostics: list[Diagnostic]


def mangle(template_name: str, args: tuple[str, ...]) -> str:
    return template_name + "__" + "__".join(a.replace("::", "_") for a in args)


def monomorphize(units: list[UnitView]) -> MonoResult:
    return _Mono(units).run()


class _Mono:
    def __init__(self, units: list[UnitView]):
        self.units = units
        self.diags: list[Diagnostic] = []
        # (template key, arg keys) -> mangled name
        self.done: dict[tuple, str] = {}
        self.order: list[tuple] = []
        self.clones: dict[tuple, ast.ModuleDecl] = {}
        self.instances: dict[tuple, GenericInstance] = {}
        self.stack: list[tuple] = []
        # module symbol key -> (unit, file_id, decl)
        self.modules: dict[tuple[str, str], tuple[str, str, ast.ModuleDecl]] = {}
        for u in units:
            for sf in u.files:
                for item in sf.items:
                    if isinstance(item, ast.ModuleDecl):
                        self.modules.setdefault((u.name, item.name), (u.name, sf.file_id, item))
        self.tables = {u.name: u.table for u in units}

    def run(self) -> MonoResult:
        out: dict[tuple[str, str], list[ast.Item]] = {}
        rewritten: dict[tuple[str, str], ast.ModuleDecl] = {}
        for u in self.units:
            for sf in u.files:
                for item in sf.items:
                    if isinstance(item, ast.ModuleDecl) and not item.generic_params:
                        clone = copy.deepcopy(item)
                        self.rewrite_insts(clone, u.name, item, env={})
                        rewritten[(u.name, item.name)] = clone
        # Place items: templates are replaced by their instances, in mangled-name
        # order; everything else keeps its source position.
        for u in self.units:
            for sf in u.files:
                items: list[ast.Item] = []
                for item in sf.items:
                    if isinstance(item, ast.ModuleDecl):
                        if item.generic_params:
                            made = [
                                self.clones[key]
                                for key in self.order
                                if self.instances[key].template is item
                            ]
                            items.extend(sorted(made, key=lambda m: m.name))
                        else:
                            items.append(rewritten[(u.name, item.name)])
                    else:
                        items.append(copy.deepcopy(item))
                out[(u.name, sf.file_id)] = items
        self.check_collisions()
        name_map = {
            inst.mangled_name: {"template": inst.template.name, "args": list(inst.args)}
            for inst in (self.instances[k] for k in self.order)
        }
        return MonoResult(out, [self.instances[k] for k in self.order], name_map, self.diags)

    def module_scope(self, unit: str, decl: ast.ModuleDecl) -> Scope:
        return self.tables[unit].module_scopes[id(decl)]

    def rewrite_insts(self, clone: ast.ModuleDecl, unit: str, template: ast.ModuleDecl, env: dict[str, tuple]) -> None:
        """Rewrite generic inst targets in `clone` to mangled concrete names.

        Resolution happens in `template`'s defining scope; `env` maps generic
        parameter names to already-resolved argument module keys.
        """
        scope = self.module_scope(unit, template)
        table = self.tables[unit]
        for it, _ in ast.iter_module_items(clone.body):
            if not isinstance(it, ast.InstDecl):
                continue
            target_key = self.resolve_module_key(it.target, scope, table, env)
            if target_key is None:
                continue
            _, _, target_decl = self.modules[target_key]
            if not target_decl.generic_params:
                if it.generic_args:
                    self.diags.append(
                        Diagnostic(
                            "E0204",
                            f"`{target_decl.name}` is not generic but got {len(it.generic_args)} generic argument(s)",
                            it.target.span,
                        )
                    )
                    it.generic_args = []
                continue
            if len(it.generic_args) != len(target_decl.generic_params):
                self.diags.append(
                    Diagnostic(
                        "E0204",
                        f"`{target_decl.name}` expects {len(target_decl.generic_params)} generic argument(s), got {len(it.generic_args)}",
                        it.target.span,
                    )
                )
                continue
            arg_keys = []
            ok = True
            for arg in it.generic_args:
                key = self.resolve_module_key(arg, scope, table, env, required=True)
                if key is None:
                    ok = False
                    break
                arg_keys.append(key)
            if not ok:
                continue
            mangled = self.expand(target_key, tuple(arg_keys), it.target.span)
            it.target = ast.PathExpr([mangled], it.target.span)
            it.generic_args = []

    def resolve_module_key(self, path: ast.PathExpr, scope, table, env: dict[str, tuple], required: bool = False):
        """Module key for an inst-target or generic-argument path, or None."""
        substituted = getattr(path, "_substituted_key", None)
        if substituted is not None:
            return substituted
        head = path.segments[0]
        if len(path.segments) == 1 and head in env:
            return env[head]
        quiet: list[Diagnostic] = []
        rp = resolve(path, scope, table, quiet)
        if rp is None:
            return None  # E0202/E0203 are reported by the analyzer's pass
        if rp.target.kind == SymbolKind.MODULE:
            return (rp.target.unit, rp.target.name)
        if rp.target.kind == SymbolKind.GENERIC_PARAM:
            return None  # inst of an unsubstituted parameter: template body itself
        if required:
            self.diags.append(
                Diagnostic(
                    "E0205",
                    f"generic argument `{path.text}` is a {rp.target.kind_name}, not a module",
                    path.span,
                )
            )
        return None

    def expand(self, template_key: tuple, arg_keys: tuple, use_span: Span) -> str:
        unit, file_id, template = self.modules[template_key]
        args_display = tuple("::".join(self.display(k, unit)) for k in arg_keys)
        mangled = mangle(template.name, args_display)
        key = (template_key, arg_keys)
        if key in self.done:
            return mangled
        if key in self.stack:
            self.diags.append(
                Diagnostic(
                    "E0206",
                    f"recursive generic instantiation of `{template.name}`",
                    use_span,
                )
            )
            return mangled
        self.stack.append(key)
        clone = copy.deepcopy(template)
        clone.name = mangled
        clone.generic_params = []
        env = dict(zip(template.generic_params, arg_keys))
        self.substitute_paths(clone, env, unit)
        self.rewrite_insts(clone, unit, template, env)
        self.stack.pop()
        self.done[key] = mangled
        self.order.append(key)
        self.clones[key] = clone
        self.instances[key] = GenericInstance(template, args_display, mangled, unit, file_id)
        return mangled

    def display(self, key: tuple, from_unit: str) -> list[str]:
        """Path for an argument module as seen from `from_unit`.

        Cross-project arguments keep their namespace so mangled names stay
        injective; the emitter only uses the last segment.
        """
        unit, name = key
        return [name] if unit == from_unit else [unit, name]

    def substitute_paths(self, clone: ast.ModuleDecl, env: dict[str, tuple], unit: str) -> None:
        """Replace generic-parameter heads in inst targets and generic args."""

        def substitute(path: ast.PathExpr) -> ast.PathExpr:
            if len(path.segments) == 1 and path.segments[0] in env:
                key = env[path.segments[0]]
                new = ast.PathExpr(self.display(key, unit), path.span)
                new._substituted_key = key  # type: ignore[attr-defined]
                return new
            return path

        for it, _ in ast.iter_module_items(clone.body):
            if not isinstance(it, ast.InstDecl):
                continue
            it.target = substitute(it.target)
            it.generic_args = [substitute(a) for a in it.generic_args]

    def check_collisions(self) -> None:
        user_names = {}
        for (unit, name), (_, _, decl) in self.modules.items():
            user_names[name] = decl
        for key in self.order:
            inst = self.instances[key]
            if inst.mangled_name in user_names:
                self.diags.append(
                    Diagnostic(
                        "E0201",
                        f"monomorphized name `{inst.mangled_name}` collides with an existing module",
                        user_names[inst.mangled_name].name_span,
                        [Related("template declared here", inst.template.name_span)],
                    )
                )
