"""Pipeline orchestration shared by the CLI and the test suite."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import ast
from .analyzer import AnalysisInfo, analyze_unit
from .diagnostics import Diagnostic, has_errors, sorted_diagnostics
from .docgen import DocModel, extract_docs, write_docs
from .emitter import EmitConfig, emit_project
from .parser import parse_source
from .project import (
    DependencySource,
    Lockfile,
    Manifest,
    PlanUnit,
    build_plan,
    load_manifest,
    resolve_dependencies,
)
from .resolver import MonoResult, SymbolTable, UnitView, build_symbols, monomorphize


@dataclass
class LoadedProgram:
    manifest: Manifest | None
    plan: list[PlanUnit] = field(default_factory=list)
    sources: list[DependencySource] = field(default_factory=list)
    lock: Lockfile = field(default_factory=Lockfile)
    diagnostics: list[Diagnostic] = field(default_factory=list)


def load_program(manifest_path: Path, offline: bool = False) -> LoadedProgram:
    """Manifest + lockfile + dependency resolution + compile order."""
    manifest, diags = load_manifest(manifest_path)
    if manifest is None:
        return LoadedProgram(None, diagnostics=diags)
    lock_path = manifest.root_dir / "vl.lock"
    lock = Lockfile.parse(lock_path.read_text(encoding="utf-8")) if lock_path.is_file() else None
    sources, new_lock, ddiags = resolve_dependencies(manifest, lock, offline)
    diags += ddiags
    plan, pdiags = build_plan(manifest, sources)
    diags += pdiags
    return LoadedProgram(manifest, plan, sources, new_lock, diags)


def discover_sources(root: Path) -> list[Path]:
    """All .vl files under src/, recursive, sorted by path for determinism."""
    src = root / "src"
    return sorted(src.rglob("*.vl")) if src.is_dir() else []


@dataclass
class UnitResult:
    name: str
    manifest: Manifest
    root: Path
    is_root: bool
    config: EmitConfig
    files: list[ast.SourceFile] = field(default_factory=list)
    stems: dict[str, str] = field(default_factory=dict)  # file_id -> output stem
    table: SymbolTable | None = None
    info: AnalysisInfo | None = None


@dataclass
class ProgramResult:
    units: list[UnitResult] = field(default_factory=list)
    mono: MonoResult | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)
    source_texts: dict[str, str] = field(default_factory=dict)

    @property
    def root(self) -> UnitResult | None:
        for u in self.units:
            if u.is_root:
                return u
        return None

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


def check_program(loaded: LoadedProgram) -> ProgramResult:
    """Parse, resolve, and analyze every unit in dependency order."""
    result = ProgramResult(diagnostics=list(loaded.diagnostics))
    url2name = {s.url: s.name for s in loaded.sources}
    tables: dict[str, SymbolTable] = {}
    for pu in loaded.plan:
        unit = UnitResult(
            pu.name,
            pu.manifest,
            pu.root,
            pu.is_root,
            EmitConfig(pu.manifest.clock_type, pu.manifest.reset_type),
        )
        for path in discover_sources(pu.root):
            rel = path.relative_to(pu.root)
            file_id = str(rel) if pu.is_root else str(path)
            text = path.read_text(encoding="utf-8")
            result.source_texts[file_id] = text
            sf, pdiags = parse_source(text, file_id)
            result.diagnostics += pdiags
            unit.files.append(sf)
            unit.stems[file_id] = str(rel.relative_to("src").with_suffix(""))
        deps = {}
        for d in pu.manifest.dependencies:
            name = url2name.get(d.url)
            if name in tables:
                deps[name] = tables[name]
        table, rdiags = build_symbols(unit.files, deps, pu.name)
        result.diagnostics += rdiags
        adiags, info = analyze_unit(unit.files, table)
        result.diagnostics += adiags
        unit.table = table
        unit.info = info
        tables[pu.name] = table
        result.units.append(unit)
    result.mono = monomorphize([UnitView(u.name, u.files, u.table) for u in result.units])
    result.diagnostics += result.mono.diagnostics
    result.diagnostics = sorted_diagnostics(result.diagnostics)
    return result


def check_strings(named_sources: list[tuple[str, str]], name: str = "local") -> ProgramResult:
    """Single-unit pipeline over in-memory sources (test convenience)."""
    result = ProgramResult()
    unit = UnitResult(name, Manifest(name, "0.0.0"), Path("."), True, EmitConfig())
    for file_id, text in named_sources:
        result.source_texts[file_id] = text
        sf, pdiags = parse_source(text, file_id)
        result.diagnostics += pdiags
        unit.files.append(sf)
        unit.stems[file_id] = Path(file_id).stem
    table, rdiags = build_symbols(unit.files, {}, name)
    result.diagnostics += rdiags
    adiags, info = analyze_unit(unit.files, table)
    result.diagnostics += adiags
    unit.table = table
    unit.info = info
    result.units.append(unit)
    result.mono = monomorphize([UnitView(unit.name, unit.files, unit.table)])
    result.diagnostics += result.mono.diagnostics
    result.diagnostics = sorted_diagnostics(result.diagnostics)
    return result


def emit_program(result: ProgramResult, out_root: Path) -> tuple[list[Path], list[Diagnostic]]:
    """Write all .sv files plus the name_map.json sidecar under `out_root`."""
    written: list[Path] = []
    diags: list[Diagnostic] = []
    for unit in result.units:
        out_dir = out_root / "sv" if unit.is_root else out_root / "sv" / unit.name
        files = []
        for sf in unit.files:
            items = result.mono.items.get((unit.name, sf.file_id), [])
            files.append((unit.stems[sf.file_id], items))
        paths, ediags = emit_project(files, unit.config, out_dir)
        written += paths
        diags += ediags
        if ediags:
            return written, diags
    out_root.mkdir(parents=True, exist_ok=True)
    name_map_path = out_root / "name_map.json"
    name_map_path.write_text(json.dumps(result.mono.name_map, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    written.append(name_map_path)
    return written, diags


def doc_program(result: ProgramResult, out_root: Path) -> tuple[list[Path], list[DocModel], list[Diagnostic]]:
    """Generate documentation pages for the root project's pub modules."""
    root = result.root
    if root is None:
        return [], [], []
    models, diags = extract_docs(root.files)
    written = write_docs(models, out_root / "doc", root.manifest.wavedrom_url)
    return written, models, diags
