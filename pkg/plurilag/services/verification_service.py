"""Orchestration of the verification commands."""

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from plurilag.algebra.bicomplex import BiForm, contract, d_horizontal, delta_vertical, total_derivative_form
from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import JetSpace, MultiIndex
from plurilag.algebra.operators import (
    EvolutionaryVF,
    euler_operator,
    total_derivative,
    var_derivative_1d,
    var_derivative_2d,
)
from plurilag.algebra.render import parse, render, render_form
from plurilag.algebra.rewriting import EvolutionSystem, RewritingSystem, SineGordonSystem, substitute_flow
from plurilag.core.logging import get_logger
from plurilag.models.requests import Command, RunConfig
from plurilag.models.responses import EquationRecord, EquationStatus, HeaderRecord, MatrixRecord
from plurilag.services.cache_service import CacheService
from plurilag.services.euler_lagrange import (
    ClassifiedEquation,
    ELEquation,
    ELFamily,
    ELReport,
    classify,
    classify_equation,
    closedness_check,
    dL_coefficients,
    el_curves,
    el_surfaces,
    first_jet_system,
)
from plurilag.services.hamiltonian import (
    FormalIntegral,
    closedness_chain,
    hamiltonian,
    hamiltonian_flow_residual,
    involutivity_matrix,
    poisson_bracket,
    poisson_bracket_potential,
)
from plurilag.services.kdv_hierarchy import (
    HierarchyContext,
    build_two_form,
    c_family_member,
    check_first_integral,
    closedness_factor,
    lagrangian_1i,
    lagrangian_ij_i,
    lagrangian_ij_j,
    shift_to_field,
    shift_to_potential,
    varsym_residual,
    varsym_residual_j,
)
from plurilag.services.report_service import Report
from plurilag.services.sampling import random_form, random_poly, random_rational
from plurilag.services.sine_gordon import L12, L13, L23, SPACE as SG_SPACE, verify_sg

logger = get_logger(__name__)


# -- parallel classification ------------------------------------------------------------


@dataclass(frozen=True)
class SystemSpec:
    """Picklable description of a rewriting system; workers rebuild it once."""

    kind: str
    n: int
    rhs: Tuple[Tuple[int, str], ...] = ()

    @classmethod
    def for_context(cls, ctx: HierarchyContext) -> "SystemSpec":
        rhs = tuple((j, render(g, ctx.space)) for j, g in sorted(ctx.system.rhs.items()))
        return cls("pkdv", ctx.n, rhs)

    @classmethod
    def sine_gordon(cls) -> "SystemSpec":
        return cls("sine-gordon", 3)

    @property
    def space(self) -> JetSpace:
        return SG_SPACE if self.kind == "sine-gordon" else JetSpace.pkdv(self.n, "v")

    def build(self) -> RewritingSystem:
        if self.kind == "sine-gordon":
            return SineGordonSystem()
        return EvolutionSystem({j: parse(text, self.space) for j, text in self.rhs}, self.n)


_worker: Dict[str, object] = {}


def _init_worker(spec: SystemSpec) -> None:
    _worker["spec"] = spec
    _worker["system"] = spec.build()


def _classify_batch(batch: List[Tuple[str, Tuple[int, ...], Tuple[int, ...], str]]):
    spec: SystemSpec = _worker["spec"]
    system: RewritingSystem = _worker["system"]
    relations = system.relations()
    out = []
    for family, indices, multi_index, text in batch:
        eq = ELEquation(ELFamily(family), indices, MultiIndex(multi_index), parse(text, spec.space))
        result = classify_equation(eq, system, relations)
        out.append((result.status.value, render(result.reduced, spec.space), result.flow))
    return out


def classify_parallel(
    eqs: Sequence[ELEquation], spec: SystemSpec, jobs: int, system: Optional[RewritingSystem] = None
) -> ELReport:
    """classify() over a process pool; the merged report is ordered exactly as the serial one."""
    if jobs <= 1 or len(eqs) < 2 * jobs:
        return classify(eqs, system or spec.build())
    space = spec.space
    payload = [(eq.family.value, eq.indices, tuple(eq.multi_index), render(eq.residual, space)) for eq in eqs]
    size = max(1, math.ceil(len(payload) / (jobs * 4)))
    batches = [payload[k:k + size] for k in range(0, len(payload), size)]
    logger.info(f"Classifying {len(eqs)} equations on {jobs} workers ({len(batches)} batches)")
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(spec,)) as pool:
        results = [item for batch in pool.map(_classify_batch, batches) for item in batch]
    entries = [
        ClassifiedEquation(eq, EquationStatus(status), parse(reduced, space), flow)
        for eq, (status, reduced, flow) in zip(eqs, results)
    ]
    entries.sort(key=lambda e: e.equation.key)
    return ELReport(entries)


def equation_records(report: ELReport, space: JetSpace) -> List[EquationRecord]:
    return [
        EquationRecord(
            family=e.equation.family.value,
            indices=list(e.equation.indices),
            multi_index=list(e.equation.multi_index),
            residual=render(e.equation.residual, space),
            status=e.status,
            flow=e.flow,
            reduced=render(e.reduced, space),
        )
        for e in report.entries
    ]


# -- the service -------------------------------------------------------------------------


class VerificationService:
    """Runs one command and collects its report."""

    def run(self, cfg: RunConfig, cache: Optional[CacheService] = None) -> Report:
        cache = cache or CacheService(cfg.cache_dir)
        handlers: Dict[Command, Callable[[RunConfig, CacheService], Report]] = {
            Command.GENERATE: self.generate,
            Command.VERIFY_PKDV: self.verify_pkdv,
            Command.VERIFY_SINE_GORDON: self.verify_sine_gordon,
            Command.VERIFY_CURVES: self.verify_curves_demo,
            Command.INVOLUTIVITY: self.involutivity,
            Command.BICOMPLEX_PROPS: self.bicomplex_props,
        }
        logger.info(f"Running {cfg.command.value} (N={cfg.n}, k_max={cfg.k_max}, jobs={cfg.jobs})")
        report = handlers[cfg.command](cfg, cache)
        summary = report.finish()
        logger.info(f"{cfg.command.value}: {'passed' if summary.passed else 'FAILED'} {summary.counts}")
        return report

    @staticmethod
    def _header(cfg: RunConfig, space: JetSpace, k_max: Optional[int] = None, seed: bool = False) -> HeaderRecord:
        return HeaderRecord(
            command=cfg.command.value,
            n=space.n,
            k_max=k_max,
            coordinates=list(space.coordinates),
            field=space.field,
            omit=cfg.omit,
            seed=cfg.seed if seed else None,
        )

    # -- generate ------------------------------------------------------------------------

    def generate(self, cfg: RunConfig, cache: CacheService) -> Report:
        k = cfg.effective_k_max
        ctx = cache.load_or_build(cfg.n, k)
        report = Report(self._header(cfg, ctx.space, k))
        for m in range(k + 1):
            report.polynomial(f"r_{m}", ctx.r[m], ctx.field_space)
        for m in range(1, k + 1):
            report.polynomial(f"g_{m}", ctx.g[m], ctx.space)
        for m in range(1, k + 1):
            report.polynomial(f"h_{m}", ctx.h[m], ctx.space)
        if ctx.n >= 2 and k >= ctx.n:
            for (i, j), p in build_two_form(ctx).items():
                report.polynomial(f"L_{i}{j}", p, ctx.space)
        return report

    # -- PKdV ----------------------------------------------------------------------------

    def verify_pkdv(self, cfg: RunConfig, cache: CacheService) -> Report:
        n, k = cfg.n, cfg.effective_k_max
        ctx = cache.load_or_build(n, k)
        space = ctx.space
        report = Report(self._header(cfg, space, k, seed=True))
        form = build_two_form(ctx)

        eqs = el_surfaces(form)
        el = classify_parallel(eqs, SystemSpec.for_context(ctx), cfg.jobs, ctx.system)
        logger.info(f"PKdV N={n}: {len(eqs)} equations, {el.counts()}")
        report.extend(equation_records(el, space))
        expected = {f"t{j}" for j in range(2, n + 1)}
        report.flag(
            "evolution equations are exactly the flows",
            el.evolution_flows() == expected,
            detail=", ".join(sorted(el.evolution_flows() - {None})),
        )

        self._hierarchy_checks(ctx, report, k)
        self._two_form_checks(ctx, form, report, cfg.seed)
        omits: List[Optional[int]] = [cfg.omit] if cfg.omit is not None else [None, *range(2, n + 1)]
        for omit in omits:
            label = "all flows" if omit is None else f"all flows but t{omit}"
            for (i, j, l), residual in closedness_check(form, ctx.system, omit).items():
                report.check(f"M_{i}{j}{l} on {label}", residual.reduced, space)
                report.check(f"D_x M_{i}{j}{l} on {label}", residual.reduced_x_derivative, space)
        return report

    def _hierarchy_checks(self, ctx: HierarchyContext, report: Report, k: int) -> None:
        u_space, v_space = ctx.field_space, ctx.space
        first = check_first_integral(ctx.r, k)
        for m, residual in enumerate(first.residuals):
            report.check(
                f"first integral, coefficient of z^-{2 * m}",
                residual,
                u_space,
                detail=f"expected {render(first.expected[m], u_space)}",
            )
        for m in range(1, k + 1):
            report.check(
                f"δr_{m}/δu = {4 * m - 2} r_{m - 1}",
                euler_operator(ctx.r[m]) - ctx.r[m - 1] * (4 * m - 2),
                u_space,
            )
        v_x = MultiIndex.pure_x(ctx.n, 1)
        for m in range(1, k + 1):
            g_prev = shift_to_potential(ctx.r[m - 1])
            report.check(
                f"δg_{m}/δv_x = {4 * m - 2} g_{m - 1}",
                var_derivative_1d(ctx.g[m], v_x, 1) - g_prev * (4 * m - 2),
                v_space,
            )
            report.check(f"δh_{m}/δv_x = g_{m}", var_derivative_1d(ctx.h[m], v_x, 1) - ctx.g[m], v_space)
            report.check(f"δh_{m}/δv = -D_x g_{m}", hamiltonian_flow_residual(ctx, m), v_space)
        zero = MultiIndex.zero(ctx.n)
        for m in range(2, ctx.n + 1):
            expected = total_derivative(ctx.g[m], 1) - ctx.v_time(m, 1)
            report.check(
                f"δ_1{m} L_1{m}/δv = -v_x,t{m} + D_x g_{m}",
                var_derivative_2d(lagrangian_1i(ctx, m), zero, 1, m) - expected,
                v_space,
            )
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                report.check(f"b_{i}{j} + b_{j}{i} = g_{i} g_{j}", ctx.b[(i, j)] + ctx.b[(j, i)] - ctx.g[i] * ctx.g[j], v_space)
                report.check(
                    f"D_x b_{i}{j} = D_x(g_{i}) g_{j}",
                    total_derivative(ctx.b[(i, j)], 1) - total_derivative(ctx.g[i], 1) * ctx.g[j],
                    v_space,
                )
        for i in range(1, k + 1):
            for j in range(1, ctx.n + 1):
                residual = (
                    total_derivative(ctx.h[i], j)
                    + total_derivative(ctx.g[i], 1) * ctx.v_time(j)
                    - total_derivative(ctx.a[(i, j)], 1)
                )
                report.check(f"D_{j}(h_{i}) + D_x(g_{i}) v_t{j} = D_x a_{i}{j}", residual, v_space)

    def _two_form_checks(self, ctx: HierarchyContext, form, report: Report, seed: int) -> None:
        space = ctx.space
        n = ctx.n
        times = range(2, n + 1)
        for i in times:
            for j in times:
                if i == j:
                    continue
                report.check(f"variational symmetry g_{j} of L_1{i}, (i)-variant", varsym_residual(ctx, i, j), space)
                report.check(f"variational symmetry g_{i} of L_1{j}, (j)-variant", varsym_residual_j(ctx, i, j), space)

        # c-family, (i, j) = (2, 3); the degenerate member (v_ti - g_i)(v_tj - g_j) is its c -> infinity limit
        rng = random.Random(seed)
        i, j = 2, 3
        report.check("c-family at c = 0 is L_23", c_family_member(ctx, i, j, 0) - form[(i, j)], space)
        for _ in range(3):
            c = random_rational(rng)
            member = c_family_member(ctx, i, j, c)
            report.check(
                f"c-family (c = {c}) on v_t{j} = g_{j} is L_{i}{j}^({i})",
                substitute_flow(member, ctx.system, j) - lagrangian_ij_i(ctx, i, j),
                space,
            )
            report.check(
                f"c-family (c = {c}) on v_t{i} = g_{i} is L_{i}{j}^({j})",
                substitute_flow(member, ctx.system, i) - lagrangian_ij_j(ctx, i, j),
                space,
            )

        coefficients = dL_coefficients(form)
        for j in times:
            for l in range(j + 1, n + 1):
                report.check(
                    f"M_1{j}{l} factorises",
                    coefficients[(1, j, l)] - closedness_factor(ctx, j, l),
                    space,
                )

    # -- sine-Gordon ------------------------------------------------------------------------

    def verify_sine_gordon(self, cfg: RunConfig, cache: CacheService) -> Report:
        report = Report(self._header(cfg, SG_SPACE))
        for name, text in (("L_12", L12), ("L_13", L13), ("L_23", L23)):
            report.polynomial(name, parse(text, SG_SPACE), SG_SPACE)
        spec = SystemSpec.sine_gordon()
        result = verify_sg(lambda eqs, system: classify_parallel(eqs, spec, cfg.jobs, system))
        report.extend(equation_records(result.report, SG_SPACE))
        report.flag(
            "evolution equations are sine-Gordon and mKdV",
            result.report.evolution_flows() == {"sine-gordon", "mkdv"},
            detail=", ".join(sorted(result.report.evolution_flows() - {None})),
        )
        for item in result.checklist:
            report.check(item.name, item.computed - item.expected, SG_SPACE, detail=render(item.expected, SG_SPACE))
        report.check("dL = -(u_z - 1/2*u_x^3 - u_xxx)(u_xy - sin u)", result.dl - result.dl_expected, SG_SPACE)
        report.check("D_phi L_12 = D_x N + D_y M", result.varsym, SG_SPACE)
        for label, residual in result.closed_on_either.items():
            report.check(f"dL vanishes on {label} solutions", residual, SG_SPACE)
        return report

    # -- curves -----------------------------------------------------------------------------

    @staticmethod
    def demo_one_form(n: int) -> List[DiffPoly]:
        """L_i = u_i^2/2 + u u_{i+1} - i u^3 (indices cyclic)."""
        u = DiffPoly.x_var(n, 0)
        out = []
        for i in range(1, n + 1):
            u_i = DiffPoly.var(n, MultiIndex.unit(n, i))
            u_next = DiffPoly.var(n, MultiIndex.unit(n, i % n + 1))
            out.append(u_i ** 2 / 2 + u * u_next - u ** 3 * i)
        return out

    def verify_curves_demo(self, cfg: RunConfig, cache: CacheService) -> Report:
        n = cfg.n
        space = JetSpace.pkdv(n, "u")
        report = Report(self._header(cfg, space))
        lagrangians = self.demo_one_form(n)
        for i, p in enumerate(lagrangians, start=1):
            report.polynomial(f"L_{i}", p, space)
        expected_system = first_jet_system(lagrangians)
        generated = {(eq.family, eq.indices, tuple(eq.multi_index)): eq.residual for eq in el_curves(lagrangians)}
        for key, expected in sorted(expected_system.items(), key=lambda kv: (kv[0][0].value, kv[0][1], kv[0][2])):
            family, indices, multi_index = key
            computed = generated.get(key, DiffPoly.zero(n))
            report.check(f"{family.value} {indices} I={multi_index}", computed - expected, space, detail=render(expected, space))
        extra = [key for key, residual in generated.items() if key not in expected_system and residual]
        report.flag("no further nonzero curve equations", not extra, detail=f"{len(generated)} equations generated")
        return report

    # -- Hamiltonians -----------------------------------------------------------------------

    def involutivity(self, cfg: RunConfig, cache: CacheService) -> Report:
        k = cfg.effective_k_max
        ctx = cache.load_or_build(cfg.n, max(k, cfg.n))
        u_space = ctx.field_space
        report = Report(self._header(cfg, u_space, k))
        matrix = involutivity_matrix(ctx, k)
        report.add(MatrixRecord(name="{∫h_i, ∫h_j} = ∫0", rows=matrix))
        report.flag("Hamiltonians in involution", all(all(row) for row in matrix), detail=f"{k}x{k}")
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                potential = poisson_bracket_potential(FormalIntegral(ctx.h[i]), FormalIntegral(ctx.h[j]))
                u_form = poisson_bracket(hamiltonian(ctx, i), hamiltonian(ctx, j))
                report.flag(
                    f"potential bracket of h_{i}, h_{j} agrees",
                    FormalIntegral(shift_to_field(potential.representative)) == u_form,
                )
        for j in range(2, ctx.n + 1):
            for l in range(j + 1, ctx.n + 1):
                chain = closedness_chain(ctx, j, l)
                report.flag(
                    f"∫M_1{j}{l} = ∫g_{l} D_x g_{j} = {{∫h_{j}, ∫h_{l}}}",
                    chain.consistent and chain.bracket.is_zero(),
                )
        return report

    # -- bicomplex --------------------------------------------------------------------------

    def bicomplex_props(self, cfg: RunConfig, cache: CacheService) -> Report:
        n = cfg.n
        space = JetSpace.pkdv(n, "u")
        report = Report(self._header(cfg, space, seed=True))
        rng = random.Random(cfg.seed)
        failures: Dict[str, Optional[str]] = {}
        names = ["d∘d = 0", "δ∘δ = 0", "dδ + δd = 0", "D_i δ = δ D_i", "dι + ιd = 0", "ι δL is a (0,2)-form"]

        def record(name: str, form: BiForm) -> None:
            if form and failures.get(name) is None:
                failures[name] = render_form(form, space)

        for _ in range(cfg.count):
            p, q = rng.randint(0, 2), rng.randint(0, 3)
            w = random_form(rng, n, p, q)
            record(names[0], d_horizontal(d_horizontal(w)))
            record(names[1], delta_vertical(delta_vertical(w)))
            record(names[2], d_horizontal(delta_vertical(w)) + delta_vertical(d_horizontal(w)))

            f = BiForm.function(random_poly(rng, n, max_order=2))
            i = rng.randint(1, n)
            record(names[3], total_derivative_form(delta_vertical(f), i) - delta_vertical(total_derivative_form(f, i)))

            vf = EvolutionaryVF(random_poly(rng, n, max_order=1, max_degree=2))
            record(names[4], d_horizontal(contract(vf, w)) + contract(vf, d_horizontal(w)))

            lagrangian = random_form(rng, n, 0, 2)
            if contract(vf, delta_vertical(lagrangian)).bidegree != (0, 2):
                failures.setdefault(names[5], "wrong bidegree")

        for name in names:
            report.flag(name, failures.get(name) is None, detail=failures.get(name) or f"{cfg.count} samples")
        return report


# Global verification service instance
verification_service = VerificationService()
