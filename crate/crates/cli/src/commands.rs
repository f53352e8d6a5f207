use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use birzeta::complex::face;
use birzeta::generators::{
    arrangement_zeta, bundled_line_arrangements, cone_example, node_skeleton, random_complex, skeleton_zeta,
    sm_enumeration_check, ArrangementLattice, SkeletonValuation,
};
use birzeta::planecurve::{
    bundled_germ, bundled_germs, compare_top_bir, random_germs, zeta_top_local, CurveDualGraph, DltCurveGraph,
    PoleCertificate,
};
use birzeta::ratfunc::{telescope_identity_check, Series};
use birzeta::truncation::main_theorem_mismatches;
use birzeta::{DenFactor, DltValuation, Error, FracExp, Pole, Specialization, WeightedDualComplex, ZetaExpr};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{InputError, Outcome, Report};
use crate::{Cli, Command, ComplexInput, CurveCommand, ExampleCommand, VerifyCommand, ZetaKind};

type Run = Result<Outcome, InputError>;

pub fn run(cli: &Cli) -> Run {
    let guard = cli.guard;
    match &cli.command {
        Command::Zeta { input, kind } => zeta(&load_complex(&input.file, guard)?, input.local, *kind),
        Command::Poles { input, top } => poles(&load_complex(&input.file, guard)?, input.local, *top),
        Command::Truncate { input, m, check } => truncate(input, guard, *m, *check),
        Command::Subdivide {
            file,
            face: ids,
            index,
            over_sigma,
        } => {
            let c = load_complex(file, guard)?;
            let out = c.stellar_subdivide(&face(ids), *index, *over_sigma)?;
            Ok(Outcome::Ok(Report::raw(&out, out.to_string())))
        }
        Command::Mseparate { file, m } => {
            positive_m(*m)?;
            let c = load_complex(file, guard)?;
            let out = c.make_m_separating(*m)?;
            Ok(Outcome::Ok(Report::raw(&out, out.to_string())))
        }
        Command::Nearby { input } => {
            let c = load_complex(&input.file, guard)?;
            let psi = c.nearby_cycles(input.local);
            let mut r = Report::new();
            r.line(format!("nearby cycles: {psi}"))
                .line(format!("COUNT: {}", psi.count()))
                .field("local", &input.local)
                .field("nearby_cycles", &psi)
                .field("count", &psi.count());
            Ok(Outcome::Ok(r))
        }
        Command::Euler { file } => {
            let c = load_complex(file, guard)?;
            let chi = c.euler_char();
            let count = c.nearby_cycles(false).count();
            let mut r = Report::new();
            r.line(format!("euler characteristic: {chi}"))
                .line(format!("COUNT of nearby cycles: {count}"))
                .field("euler_char", &chi)
                .field("nearby_count", &count)
                .field("agree", &(chi == count));
            Ok(Outcome::from_check(chi == count, r))
        }
        Command::Lct { input } => {
            let c = load_complex(&input.file, guard)?;
            let mut r = Report::new();
            match c.lct_pole_order(input.local)? {
                None => {
                    r.line("no vertex is relevant here").field("lct", &Option::<()>::None);
                    Ok(Outcome::Ok(r))
                }
                Some(rep) => {
                    r.line(format!("lct: {}", rep.lct))
                        .line(format!("expected order at -lct: {}", rep.order))
                        .line(format!("poles: {}", pole_list(&rep.poles)))
                        .line(format!("pole at -lct with that order: {}", rep.has_pole))
                        .line(format!("-lct is the largest pole: {}", rep.maximal))
                        .field("report", &rep);
                    Ok(Outcome::from_check(rep.consistent(), r))
                }
            }
        }
        Command::Curve { command } => curve(command),
        Command::Example { command } => example(command),
        Command::Verify { command } => verify(command, guard),
    }
}

fn positive_m(m: i64) -> Result<(), InputError> {
    if m < 1 {
        return Err(InputError(format!("truncation order m = {m} must be at least 1")));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path, guard: i64) -> Result<WeightedDualComplex, InputError> {
    let c: WeightedDualComplex =
        serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let lcm = c.vertices().fold(1i64, |acc, v| num_integer::lcm(acc, v.n));
    if lcm > guard {
        return Err(InputError(format!("lcm of the N's is {lcm}, above the guard {guard}")));
    }
    Ok(c)
}

fn load_curve(input: &str) -> Result<CurveDualGraph, InputError> {
    let path = Path::new(input);
    if path.exists() {
        return serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{input}: {e}")));
    }
    bundled_germ(input).ok_or_else(|| {
        let names: Vec<&str> = bundled_germs().into_iter().map(|(n, _)| n).collect();
        InputError(format!("{input} is neither a file nor a bundled germ ({})", names.join(", ")))
    })
}

fn pole_list(ps: &[Pole]) -> String {
    let items: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn series_lines(r: &mut Report, s: &Series) {
    for (k, c) in s {
        r.line(format!("  T^{k}: {c}"));
    }
}

fn zeta(c: &WeightedDualComplex, local: bool, kind: ZetaKind) -> Run {
    let mut r = Report::new();
    r.field("local", &local);
    match kind {
        ZetaKind::Bir | ZetaKind::Rat => {
            let expr = c.zeta_bir(local);
            let hom = (kind == ZetaKind::Rat).then_some(&Specialization::Rho);
            let nf = expr.normalize(hom)?;
            let name = if kind == ZetaKind::Bir { "bir" } else { "rat" };
            r.line(format!("Z_{name} = {}", if hom.is_some() { expr.rho() } else { expr.clone() }))
                .line(format!("normal form: {nf}"))
                .line(format!("poles: {}", pole_list(&nf.poles())))
                .field("kind", &name)
                .field("expr", &expr.to_string())
                .field("normal_form", &nf)
                .field("poles", &nf.poles());
        }
        ZetaKind::Motivic => {
            if local {
                return Err(InputError("the motivic zeta function is only computed globally".into()));
            }
            let expr = c.zeta_motivic()?;
            let nf = expr.normalize(None)?;
            r.line(format!("Z_mot = {expr}"))
                .line(format!("normal form: {nf}"))
                .field("kind", &"motivic")
                .field("expr", &expr.to_string())
                .field("normal_form", &nf);
        }
        ZetaKind::Top => {
            let z = c.zeta_topological(local)?;
            let nf = z.normalize();
            let poles = z.poles();
            r.line(format!("Z_top = {z}"))
                .line(format!("normal form: {nf}"))
                .line(format!("poles: {}", pole_list(&poles)))
                .field("kind", &"top")
                .field("expr", &z.to_string())
                .field("normal_form", &nf.to_string())
                .field("poles", &poles);
        }
    }
    Ok(Outcome::Ok(r))
}

fn poles(c: &WeightedDualComplex, local: bool, top: bool) -> Run {
    let ps = if top {
        c.zeta_topological(local)?.poles()
    } else {
        c.zeta_bir(local).poles()?
    };
    let mut r = Report::new();
    r.line(format!("poles: {}", pole_list(&ps)))
        .field("kind", &if top { "top" } else { "rat" })
        .field("local", &local)
        .field("poles", &ps);
    Ok(Outcome::Ok(r))
}

fn truncate(input: &ComplexInput, guard: i64, m: i64, check: bool) -> Run {
    positive_m(m)?;
    let c = load_complex(&input.file, guard)?;
    let series = c.zeta_bir(input.local).series_expand(m)?;
    let mut r = Report::new();
    r.line(format!("coefficients up to T^{m}:"));
    series_lines(&mut r, &series);
    r.field("m", &m).field("local", &input.local).field("series", &series);
    if !check {
        return Ok(Outcome::Ok(r));
    }
    let vals = c.quasi_monomial_valuations(m);
    let bad = main_theorem_mismatches(&c, &vals, m, input.local)?;
    mismatch_lines(&mut r, &bad, vals.len());
    Ok(Outcome::from_check(bad.is_empty(), r))
}

fn mismatch_lines(r: &mut Report, bad: &[birzeta::truncation::TruncationMismatch], nvals: usize) {
    if bad.is_empty() {
        r.line(format!("valuation truncation agrees ({nvals} valuations)"));
    } else {
        for b in bad {
            r.line(format!(
                "mismatch at T^{}: zeta gives {}, valuations give {}",
                b.k, b.from_zeta, b.from_valuations
            ));
        }
    }
    r.field("valuations", &nvals).field("mismatches", &bad);
}

fn certificate_lines(r: &mut Report, certs: &[PoleCertificate]) {
    for c in certs {
        let status = if c.lct_order_two {
            "order two at the lct"
        } else if c.nonzero {
            "nonzero residue"
        } else {
            "residues cancel"
        };
        let total = c.total.as_ref().map_or("-".to_string(), |t| t.to_string());
        r.line(format!("  {} : {status}, total {total}", c.pole));
        for x in &c.contributions {
            let value = x.value.as_ref().map_or("-".to_string(), |v| v.to_string());
            let phi = x.phi.as_ref().map_or("-".to_string(), |v| v.to_string());
            r.line(format!(
                "    vertex {}: r = {}, t = {}, alphas [{}], {:?}, residue {value}, phi({}) = {phi}",
                x.vertex,
                x.r,
                x.t,
                x.alphas.join(", "),
                x.case,
                x.phi_of
            ));
        }
    }
}

fn curve(cmd: &CurveCommand) -> Run {
    match cmd {
        CurveCommand::List => {
            let names: Vec<&str> = bundled_germs().into_iter().map(|(n, _)| n).collect();
            let mut r = Report::raw(&names, "");
            for n in &names {
                r.line(*n);
            }
            Ok(Outcome::Ok(r))
        }
        CurveCommand::Analyze { input, m } => analyze(&load_curve(input)?, *m),
        CurveCommand::Compare { input } => {
            let g = load_curve(input)?;
            let mut r = Report::new();
            r.line(format!("Z_top = {}", zeta_top_local(&g).normalize()));
            match compare_top_bir(&g) {
                Ok(rep) => {
                    let show = |s: &BTreeSet<Ratio<i64>>| -> String {
                        let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                        format!("{{{}}}", items.join(", "))
                    };
                    r.line(format!("predicted top: {}", show(&rep.predicted_top)))
                        .line(format!("predicted bir: {}", show(&rep.predicted_bir)))
                        .line(format!("actual top: {}", pole_list(&rep.actual_top)))
                        .line(format!("actual bir: {}", pole_list(&rep.actual_bir)))
                        .line("all four agree")
                        .field("report", &rep)
                        .field("agree", &true);
                    Ok(Outcome::Ok(r))
                }
                Err(Error::ComparisonFailure(diff)) => {
                    r.line(diff.clone()).field("agree", &false).field("diff", &diff);
                    Ok(Outcome::Failed(r))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn analyze(g: &CurveDualGraph, m: Option<i64>) -> Run {
    let mut r = Report::new();
    let numerics = g.validate_numerics();
    r.line(format!("germ {}", g.point()))
        .line("numerical relations:")
        .line(numerics.to_string())
        .field("numerics", &numerics);
    let dg: DltCurveGraph = g.contract_twigs()?;
    let zeta = dg.zeta_bir_local();
    let poles = zeta.poles()?;
    r.line(format!("local Z_bir = {zeta}"))
        .line(format!("poles: {}", pole_list(&poles)))
        .field("zeta_bir_local", &zeta.to_string())
        .field("poles", &poles);
    if let Some(nc) = dg.normal_crossing() {
        r.line(format!("{nc:?} germ: normal crossings, value fixed rather than computed"))
            .field("normal_crossing", &format!("{nc:?}"));
        return Ok(Outcome::from_check(numerics.passes(), r));
    }
    r.line(format!("dlt model:\n{}", dg.complex()))
        .field("dlt_complex", dg.complex());
    let predicted = dg.predict_poles_bir();
    let actual: BTreeSet<_> = poles.iter().map(|p| p.s0).collect();
    let certs = dg.residue_certificates()?;
    let certified: Vec<Pole> = certs.iter().filter(|c| c.certified()).map(|c| c.pole).collect();
    r.line("residue certificates:");
    certificate_lines(&mut r, &certs);
    r.field("certificates", &certs);
    let m = m.unwrap_or(dg.max_n() + 3);
    positive_m(m)?;
    let trunc = dg.verify_main_theorem(m);
    let lct = dg.lct()?;
    let lct_ok = lct.as_ref().is_none_or(|l| l.consistent());
    if let Some(l) = &lct {
        r.line(format!("lct {} with a pole of order {} there", l.lct, l.order));
    }
    let checks = [
        ("numerical relations", numerics.passes()),
        ("predicted pole set", predicted == actual),
        ("certificates match poles", certified == poles),
        ("valuation truncation", trunc),
        ("lct consistent", lct_ok),
    ];
    for (name, ok) in checks {
        r.line(format!("{name}: {}", if ok { "ok" } else { "FAILED" }));
    }
    let all = checks.iter().all(|(_, ok)| *ok);
    r.field("truncation_order", &m)
        .field("lct", &lct)
        .field("checks", &checks.iter().map(|(n, ok)| (n.to_string(), *ok)).collect::<Vec<_>>());
    Ok(Outcome::from_check(all, r))
}

fn example(cmd: &ExampleCommand) -> Run {
    match cmd {
        ExampleCommand::Cone { n, d, check } => {
            let ex = cone_example(*n, *d)?;
            let mut r = Report::new();
            r.line(format!("expected Z_bir = {}", ex.expected))
                .line(format!("expected Z_bir above the origin = {}", ex.expected_local))
                .line(format!("complex:\n{}", ex.complex))
                .field("n", n)
                .field("d", d)
                .field("expected", &ex.expected.to_string())
                .field("expected_local", &ex.expected_local.to_string())
                .field("complex", &ex.complex);
            if !*check {
                return Ok(Outcome::Ok(r));
            }
            let global = ex.complex.zeta_bir(false).same_function(&ex.expected, None)?;
            let local = ex.complex.zeta_bir(true).same_function(&ex.expected_local, None)?;
            let sm = *d < *n as i64 || (1..=3 * d).all(|m| sm_enumeration_check(*n, *d, m));
            r.line(format!("global closed form: {}", if global { "ok" } else { "FAILED" }))
                .line(format!("local closed form: {}", if local { "ok" } else { "FAILED" }))
                .line(format!("S_m sums up to T^{}: {}", 3 * d, if sm { "ok" } else { "FAILED" }))
                .field("checks", &[global, local, sm]);
            Ok(Outcome::from_check(global && local && sm, r))
        }
        ExampleCommand::Arrangement { input, list, check } => {
            if *list {
                let names: Vec<String> = bundled_line_arrangements().into_iter().map(|(n, _)| n).collect();
                let mut r = Report::raw(&names, "");
                for n in &names {
                    r.line(n);
                }
                return Ok(Outcome::Ok(r));
            }
            let Some(input) = input else {
                return Err(InputError("give an arrangement file or a bundled name, or --list".into()));
            };
            let a = load_arrangement(input)?;
            arrangement(&a, *check)
        }
        ExampleCommand::Skeleton { file, max_n, local } => {
            let sk: Vec<SkeletonValuation> = match file {
                Some(p) => serde_json::from_str(&read(p)?)?,
                None => node_skeleton(*max_n),
            };
            for v in &sk {
                if v.n < 1 {
                    return Err(InputError(format!("skeleton valuation with N = {}", v.n)));
                }
            }
            let z = skeleton_zeta(&sk, *local);
            let m = sk.iter().map(|v| v.n).max().unwrap_or(1).max(*max_n);
            let series = z.series_expand(m)?;
            let mut r = Report::new();
            r.line(format!("Z = {z}")).line(format!("coefficients up to T^{m}:"));
            series_lines(&mut r, &series);
            r.field("expr", &z.to_string()).field("series", &series);
            Ok(Outcome::Ok(r))
        }
    }
}

fn load_arrangement(input: &str) -> Result<ArrangementLattice, InputError> {
    let path = Path::new(input);
    if path.exists() {
        return serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{input}: {e}")));
    }
    bundled_line_arrangements()
        .into_iter()
        .find(|(n, _)| n == input)
        .map(|(_, a)| a)
        .ok_or_else(|| InputError(format!("{input} is neither a file nor a bundled arrangement")))
}

fn arrangement(a: &ArrangementLattice, check: bool) -> Run {
    let z = a.chain_sum();
    let mut r = Report::new();
    r.line(format!("{} hyperplanes in dimension {}", a.hyperplanes().len(), a.dim()))
        .line(format!("{} edges, {} chains", a.edges().len(), a.chains().len()));
    for e in a.edges() {
        let hs: Vec<String> = e.hyperplanes.iter().map(|h| h.to_string()).collect();
        r.line(format!("  edge {{{}}}: nu = {}, N = {}", hs.join(","), e.nu, e.n));
    }
    let nf = z.normalize(None)?;
    r.line(format!("Z_bir = {z}"))
        .line(format!("normal form: {nf}"))
        .field("normal_form", &nf)
        .field("edges", &a.edges())
        .field("chains", &a.chains().len())
        .field("expr", &z.to_string());
    if !check {
        if let Ok(c) = a.blowup_complex() {
            r.field("complex", &c);
        }
        return Ok(Outcome::Ok(r));
    }
    if a.dim() != 2 {
        r.line("no direct complex to compare with outside the plane");
        return Ok(Outcome::Ok(r));
    }
    match arrangement_zeta(a) {
        Ok((_, c)) => {
            let c = c.expect("plane arrangements come with a complex");
            let m = 8;
            let other = a.positive_reading_series(m) != c.zeta_bir(false).series_expand(m)?;
            r.line("chain sum equals the blow-up complex")
                .line(format!(
                    "reading T^N instead of T^-N {}",
                    if other { "disagrees, as it should" } else { "also agrees" }
                ))
                .field("complex", &c)
                .field("agree", &true)
                .field("positive_reading_differs", &other);
            Ok(Outcome::from_check(other, r))
        }
        Err(Error::ComparisonFailure(diff)) => {
            r.line(diff.clone()).field("agree", &false);
            Ok(Outcome::Failed(r))
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(cmd: &VerifyCommand, guard: i64) -> Run {
    match cmd {
        VerifyCommand::Identities { random, seed } => identities(*random, *seed),
        VerifyCommand::MainTheorem { input, m, valuations } => {
            positive_m(*m)?;
            let c = load_complex(&input.file, guard)?;
            let vals: Vec<DltValuation> = match valuations {
                Some(p) => serde_json::from_str(&read(p)?)?,
                None => c.quasi_monomial_valuations(*m),
            };
            for v in &vals {
                v.check(c.dim())?;
            }
            let bad = main_theorem_mismatches(&c, &vals, *m, input.local)?;
            let mut r = Report::new();
            r.field("m", m).field("local", &input.local);
            mismatch_lines(&mut r, &bad, vals.len());
            Ok(Outcome::from_check(bad.is_empty(), r))
        }
        VerifyCommand::Numerics { inputs, random, seed } => {
            let mut graphs: Vec<(String, CurveDualGraph)> = if inputs.is_empty() {
                bundled_germs().into_iter().map(|(n, g)| (n.to_string(), g)).collect()
            } else {
                inputs
                    .iter()
                    .map(|s| Ok((s.clone(), load_curve(s)?)))
                    .collect::<Result<_, InputError>>()?
            };
            for (script, g) in random_germs(*seed, *random) {
                graphs.push((format!("{:?}", script.steps), g));
            }
            let mut r = Report::new();
            let mut failures = Vec::new();
            for (name, g) in &graphs {
                match g.validate_numerics().check() {
                    Ok(()) => {
                        r.line(format!("{name}: ok"));
                    }
                    Err(e) => {
                        r.line(format!("{name}: {e}"));
                        failures.push(format!("{name}: {e}"));
                    }
                }
            }
            r.field("checked", &graphs.len()).field("failures", &failures);
            Ok(Outcome::from_check(failures.is_empty(), r))
        }
        VerifyCommand::Residues { input } => {
            let dg = load_curve(input)?.contract_twigs()?;
            let certs = dg.residue_certificates()?;
            let ok = dg.certificates_match_poles()?;
            let poles = dg.zeta_bir_local().poles()?;
            let mut r = Report::new();
            r.line(format!("poles: {}", pole_list(&poles)));
            certificate_lines(&mut r, &certs);
            r.line(format!("certificates match poles: {}", if ok { "ok" } else { "FAILED" }))
                .field("poles", &poles)
                .field("certificates", &certs)
                .field("match", &ok);
            Ok(Outcome::from_check(ok, r))
        }
    }
}

fn identities(random: usize, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: Vec<String> = Vec::new();
    for case in 0..random {
        let size = rng.gen_range(1..=5);
        let k: Vec<DenFactor> = (0..size)
            .map(|_| {
                let a = FracExp::new(rng.gen_range(1..=20), rng.gen_range(1..=4));
                DenFactor::new(a, rng.gen_range(1..=20)).expect("positive data")
            })
            .collect();
        if !telescope_identity_check(&k) {
            let ks: Vec<String> = k.iter().map(|f| f.to_string()).collect();
            failures.push(format!("telescoping case {case}: {}", ks.join(" ")));
        }
    }
    let complexes = (random / 5).max(1);
    let mut subdivisions = 0;
    for case in 0..complexes {
        let c = random_complex(&mut rng, 4, 6);
        let before: [ZetaExpr; 2] = [c.zeta_bir(false), c.zeta_bir(true)];
        for (f, comps) in c.cells() {
            for i in 0..comps.len() {
                let s = c.stellar_subdivide(f, i, None)?;
                subdivisions += 1;
                for (local, want) in [(false, &before[0]), (true, &before[1])] {
                    if !s.zeta_bir(local).same_function(want, Some(&Specialization::Rho))? {
                        let ids: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                        failures.push(format!("complex {case}: subdividing {{{}}} (local {local})", ids.join(",")));
                    }
                }
            }
        }
    }
    let mut r = Report::new();
    r.line(format!("telescoping identity: {random} random tuples"))
        .line(format!("subdivision invariance: {complexes} random complexes, {subdivisions} subdivisions"))
        .field("seed", &seed)
        .field("telescoping_cases", &random)
        .field("complexes", &complexes)
        .field("subdivisions", &subdivisions)
        .field("failures", &failures);
    for f in &failures {
        r.line(format!("FAILED {f}"));
    }
    if failures.is_empty() {
        r.line("all identities hold");
    }
    Ok(Outcome::from_check(failures.is_empty(), r))
}
