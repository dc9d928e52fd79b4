"""Workspace persistence and the analysis session shared by CLI and server.

A workspace is a directory with a ``workspace.json`` manifest naming the
program file, the base configuration, and the named configurations. Derived
artifacts live next to it:

* ``measurements.jsonl`` — one header line, then one execution record per line
* ``models.json``       — the fitted global and per-function models
* ``reports/``          — one JSON file per rendered report

Every store carries the content hash of the program it was derived from;
loading a store against an edited program fails rather than silently reusing
stale data.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from . import serialize
from .errors import (
    MissingPrerequisite, StaleStore, UnknownConfig, UnknownOption,
)
from .interp import ExecutionRecord, hotspot_view
from .lang import Program, parse_program
from .models import (
    InconsistentModels, PerformanceInfluenceModel, diff_influence,
    fit_local_models, option_hotspots,
)
from .profdiff import annotate_with_hotspots, diff_hotspot_views
from .slicer import build_dependence_graph, cause_effect_chain

SCHEMA_VERSION = 1


def _program_hash(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


@dataclass
class Workspace:
    root: Path
    program_path: Path
    base: str
    configurations: dict  # name -> {option: value}
    _program: Program = field(default=None, repr=False)

    @classmethod
    def load(cls, path) -> "Workspace":
        path = Path(path)
        manifest = path / "workspace.json" if path.is_dir() else path
        root = manifest.parent
        try:
            obj = serialize.loads(manifest.read_text())
        except FileNotFoundError:
            raise MissingPrerequisite(
                f"no workspace manifest at {manifest}",
                "create workspace.json with program, base, configurations")
        ws = cls(root=root,
                 program_path=root / obj["program"],
                 base=obj["base"],
                 configurations=obj["configurations"])
        if ws.base not in ws.configurations:
            raise UnknownConfig(
                f"base configuration '{ws.base}' is not defined")
        return ws

    @property
    def program(self) -> Program:
        if self._program is None:
            source = self.program_path.read_text()
            self._program = parse_program(source,
                                          file=self.program_path.name)
        return self._program

    @property
    def program_hash(self) -> str:
        return _program_hash(self.program.source)

    def config(self, name: str) -> dict:
        try:
            return self.configurations[name]
        except KeyError:
            raise UnknownConfig(f"no configuration named '{name}'")

    @property
    def base_config(self) -> dict:
        return self.config(self.base)

    # --- store paths ---------------------------------------------------------

    @property
    def measurements_path(self) -> Path:
        return self.root / "measurements.jsonl"

    @property
    def models_path(self) -> Path:
        return self.root / "models.json"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    def report_path(self, kind: str, from_name: str, to_name: str) -> Path:
        return self.reports_dir / f"{kind}_{from_name}_{to_name}.json"

    # --- measurement store -----------------------------------------------------

    def append_measurements(self, records: list) -> None:
        """Append execution records; rejects a store from an edited program."""
        path = self.measurements_path
        lines = []
        if path.exists():
            self._check_store_hash(serialize.loads(
                path.read_text().splitlines()[0]), path)
        else:
            lines.append(serialize.dumps({
                "schema_version": SCHEMA_VERSION,
                "program_hash": self.program_hash,
            }))
        lines.extend(serialize.dumps(r.to_obj()) for r in records)
        with path.open("a") as fh:
            fh.write("".join(line + "\n" for line in lines))

    def load_measurements(self) -> list:
        path = self.measurements_path
        if not path.exists():
            raise MissingPrerequisite(
                "no measurements recorded",
                "run `confdebug measure` first")
        header, *rows = path.read_text().splitlines()
        self._check_store_hash(serialize.loads(header), path)
        return [ExecutionRecord.from_obj(serialize.loads(row))
                for row in rows]

    # --- model store -----------------------------------------------------------

    def write_models(self, global_model, local_models: dict) -> None:
        obj = {
            "schema_version": SCHEMA_VERSION,
            "program_hash": self.program_hash,
            "global": global_model.to_obj(),
            "local": {fn: local_models[fn].to_obj()
                      for fn in sorted(local_models)},
        }
        self.models_path.write_text(serialize.dumps(obj) + "\n")

    def load_models(self):
        path = self.models_path
        if not path.exists():
            raise MissingPrerequisite(
                "no fitted models", "run `confdebug model` first")
        obj = serialize.loads(path.read_text())
        self._check_store_hash(obj, path)
        global_model = PerformanceInfluenceModel.from_obj(obj["global"])
        local_models = {fn: PerformanceInfluenceModel.from_obj(m)
                        for fn, m in obj["local"].items()}
        return global_model, local_models

    def write_report(self, kind: str, from_name: str, to_name: str,
                     payload: str) -> Path:
        self.reports_dir.mkdir(exist_ok=True)
        path = self.report_path(kind, from_name, to_name)
        path.write_text(payload + "\n")
        return path

    def _check_store_hash(self, header: dict, path: Path) -> None:
        if header.get("program_hash") != self.program_hash:
            raise StaleStore(
                f"{path.name} was recorded for a different version of "
                f"{self.program_path.name}; delete it and re-run measure")


def fit_workspace_models(workspace: Workspace, records: list,
                         max_degree: int):
    """Global model on total time plus per-function local models.

    Both fits use the same base configuration and measurement set, so local
    coefficients sum to the global ones.
    """
    base = workspace.base_config
    measurements = [(r.config, r.total_seconds) for r in records]
    from .models import fit_exact, fit_sampled
    from .errors import DuplicateConfig, IncompleteFactorial
    try:
        global_model = fit_exact(measurements, base, max_degree)
    except (IncompleteFactorial, DuplicateConfig):
        global_model = fit_sampled(measurements, base, max_degree)
    local_models = fit_local_models(records, base, max_degree)
    return global_model, local_models


class Session:
    """All analyses over one immutable load of a workspace's stores.

    Both the CLI and the HTTP service produce their JSON reports through
    this class, so the two surfaces emit byte-identical payloads.
    """

    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self.program = workspace.program
        self.records = workspace.load_measurements()
        self.global_model, self.local_models = workspace.load_models()
        self._graph = None

    @property
    def graph(self):
        if self._graph is None:
            self._graph = build_dependence_graph(self.program)
        return self._graph

    def record_for(self, config_name: str) -> ExecutionRecord:
        config = self.workspace.config(config_name)
        for record in self.records:
            if record.config == config:
                return record
        raise MissingPrerequisite(
            f"no measurement for configuration '{config_name}'",
            "run `confdebug measure` first")

    def influencing_options(self, from_name: str, to_name: str) -> dict:
        report = diff_influence(self.global_model,
                                self.workspace.config(from_name),
                                self.workspace.config(to_name))
        obj = report.to_obj()
        obj["from"] = from_name
        obj["to"] = to_name
        return obj

    def option_hotspots(self, from_name: str, to_name: str,
                        min_delta: float = 0.0) -> dict:
        report = option_hotspots(self.local_models,
                                 self.workspace.config(from_name),
                                 self.workspace.config(to_name),
                                 min_delta=min_delta)
        obj = report.to_obj()
        obj["from"] = from_name
        obj["to"] = to_name
        return obj

    def profile_diff(self, from_name: str, to_name: str,
                     hotspot_functions=None) -> dict:
        diff = diff_hotspot_views(
            hotspot_view(self.record_for(from_name)),
            hotspot_view(self.record_for(to_name)))
        if hotspot_functions is None:
            report = option_hotspots(self.local_models,
                                     self.workspace.config(from_name),
                                     self.workspace.config(to_name))
            hotspot_functions = report.functions()
        annotate_with_hotspots(diff, hotspot_functions)
        obj = diff.to_obj()
        obj["from"] = from_name
        obj["to"] = to_name
        return obj

    def cause_effect(self, from_name: str, to_name: str,
                     options=None, hotspots=None) -> dict:
        if options is None:
            influence = diff_influence(self.global_model,
                                       self.workspace.config(from_name),
                                       self.workspace.config(to_name))
            options = sorted(set().union(
                *[opts for opts, _d in influence.influences]) or set())
        if hotspots is None:
            report = option_hotspots(self.local_models,
                                     self.workspace.config(from_name),
                                     self.workspace.config(to_name))
            hotspots = report.functions()
        coverage = (self.record_for(from_name).coverage
                    | self.record_for(to_name).coverage)
        result = cause_effect_chain(self.program, self.graph,
                                    set(options), set(hotspots), coverage)
        obj = result.to_obj()
        obj["from"] = from_name
        obj["to"] = to_name
        obj["options"] = sorted(options)
        obj["hotspots"] = sorted(hotspots)
        return obj

    def source_text(self, file: str) -> str:
        if file != self.workspace.program_path.name:
            raise UnknownConfig(f"no source file named '{file}'")
        return self.program.source
