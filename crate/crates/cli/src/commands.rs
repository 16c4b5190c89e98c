//! One function per subcommand, each producing a [`Report`].

use std::fs;

use serde::Serialize;
use serde_json::json;

use epi_mackey::burnside::{build_ring_with, ideal_image, segal_report, BurnsideElement};
use epi_mackey::cube::kan::{is_rke_by_oracle, is_rke_from};
use epi_mackey::cube::pigeonhole::verify_pigeonhole;
use epi_mackey::cube::random::{mode_for, random_diagram};
use epi_mackey::cube::{CubePoset, SubPoset, SubShape, VectDiagram};
use epi_mackey::epi_cat::{enumerate_objects, hom_count, hom_set, SliceMorphism, SliceObject};
use epi_mackey::fin_coprod::{pullback, CoproductMap};
use epi_mackey::finset::{surjection_count, FinMap};
use epi_mackey::mackey::{representable_with, MackeyData};
use epi_mackey::span_cat::{compose, SpanClass};
use epi_mackey::{suites, Exec};

use crate::render::{tuple, verdict, Report, Table};
use crate::{Cli, CliError, Command, MACKEY_CAP, RING_CAP};

const SURJ_CAP: usize = 20;
const OBJECT_CAP: usize = 12;
const LIST_CAP: u64 = 10_000;
const CUBE_CAP: usize = 6;
const PIGEONHOLE_CAP: usize = 9;

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let caps = Caps { lifted: cli.unsafe_large };
    match &cli.command {
        Command::SurjTable { max } => surj_table(*max, caps),
        Command::Objects { d, r } => objects(*d, *r, caps),
        Command::Hom { source, target, list } => hom(source, target, *list, caps),
        Command::Pullback { x, y, e, f, g, d } => pullback_cmd(x, y, e, f, g, *d),
        Command::SpanCompose { first_left, first_right, first_pairs, second_left, second_right, second_pairs, d } => {
            span_compose(
                (first_left, first_right, first_pairs),
                (second_left, second_right, second_pairs),
                *d,
            )
        }
        Command::Ring { d, r } => ring(*d, *r, caps, exec),
        Command::Marks { d, r } => marks(*d, *r, caps, exec),
        Command::Ideal { d, k, p } => ideal(*d, *k, *p, caps),
        Command::Segal { p } => segal(*p, caps),
        Command::MackeyRepresentable { d, r, at } => mackey_representable(*d, *r, at, caps, exec),
        Command::MackeyCheck { input } => {
            let text = fs::read_to_string(input)
                .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", input.display())))?;
            mackey_check(&text, caps, exec)
        }
        Command::CubeCheck { input, sub, d, r, seed, oracle, emit_failing, show_diagram } => {
            let diagram = match input {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
                    let json = serde_json::from_str(&text).map_err(|e| CliError::Invalid(e.to_string()))?;
                    VectDiagram::from_json(&json)?
                }
                None => {
                    caps.check("cube", *d, CUBE_CAP)?;
                    let p = CubePoset::subdivided(*d, *r)?;
                    let s = parse_sub(&p, sub)?;
                    random_diagram(&p, &s, mode_for(*seed), *seed)
                }
            };
            cube_check(&diagram, sub, CubeFlags { oracle: *oracle, emit_failing: *emit_failing, show: *show_diagram })
        }
        Command::Pigeonhole { d, r, s } => {
            caps.check("pigeonhole", *d, PIGEONHOLE_CAP)?;
            pigeonhole(*d, *r, *s)
        }
        Command::VerifyAll { d } => verify_all(*d, caps, exec),
        Command::Dictionary => dictionary(),
    }
}

#[derive(Clone, Copy)]
struct Caps {
    lifted: bool,
}

impl Caps {
    fn check(self, what: &str, d: usize, cap: usize) -> Result<(), CliError> {
        if d > cap && !self.lifted {
            return Err(CliError::Invalid(format!("{what} is capped at d <= {cap}; pass --unsafe-large to go beyond")));
        }
        Ok(())
    }

    fn clamp(self, d: usize, cap: usize) -> usize {
        if self.lifted {
            d
        } else {
            d.min(cap)
        }
    }
}

fn object(fibers: &[usize]) -> Result<SliceObject, CliError> {
    Ok(SliceObject::new(fibers.to_vec())?)
}

fn surj_table(max: usize, caps: Caps) -> Result<Report, CliError> {
    caps.check("surj-table", max, SURJ_CAP)?;
    let mut table = Table::new(std::iter::once("k".to_string()).chain((1..=max).map(|i| i.to_string())));
    let mut rows = Vec::new();
    for k in 1..=max {
        let row: Vec<String> = (1..=max).map(|i| surjection_count(k, i).to_string()).collect();
        table.push(std::iter::once(k.to_string()).chain(row.iter().cloned()).collect());
        rows.push(row);
    }
    let data = json!({ "max": max, "surjections": rows });
    let pretty = format!("Surj(k, i), rows k, columns i\n{}", table.aligned());
    Report::new(&data, pretty, true)?.with_csv(&table)
}

fn objects(d: usize, r: usize, caps: Caps) -> Result<Report, CliError> {
    caps.check("objects", d, OBJECT_CAP)?;
    let objs = enumerate_objects(d, r)?;
    let mut table = Table::new(["index", "object", "size"]);
    for (i, u) in objs.iter().enumerate() {
        table.push(vec![i.to_string(), u.to_string(), u.total_size().to_string()]);
    }
    let data = json!({ "d": d, "r": r, "objects": objs });
    let pretty = format!("Epi_{{{d},{r}}}: {} classes\n{}", objs.len(), table.aligned());
    Report::new(&data, pretty, true)?.with_csv(&table)
}

fn hom(source: &[usize], target: &[usize], list: bool, caps: Caps) -> Result<Report, CliError> {
    let (u, v) = (object(source)?, object(target)?);
    let count = hom_count(&u, &v);
    let mut data = json!({ "source": u, "target": v, "count": count.to_string() });
    let mut pretty = format!("|Hom({u}, {v})| = {count}\n");
    let mut table = Table::new(["index", "map"]);
    if list {
        if count > LIST_CAP.into() && !caps.lifted {
            return Err(CliError::Invalid(format!("{count} maps; pass --unsafe-large to list them")));
        }
        let maps: Vec<Vec<usize>> = hom_set(&u, &v).iter().map(|m| m.map().values().to_vec()).collect();
        for (i, m) in maps.iter().enumerate() {
            table.push(vec![i.to_string(), tuple(m)]);
        }
        pretty.push_str(&table.aligned());
        data["maps"] = json!(maps);
    } else {
        table.push(vec!["count".into(), count.to_string()]);
    }
    Report::new(&data, pretty, true)?.with_csv(&table)
}

fn morphism(source: &[usize], target: &SliceObject, values: &[usize]) -> Result<SliceMorphism, CliError> {
    let map = FinMap::new(values.to_vec(), target.total_size())?;
    Ok(SliceMorphism::new(object(source)?, target.clone(), map)?)
}

fn pullback_cmd(
    x: &[usize],
    y: &[usize],
    e: &[usize],
    f: &[usize],
    g: &[usize],
    d: Option<usize>,
) -> Result<Report, CliError> {
    let e = object(e)?;
    let f = morphism(x, &e, f)?;
    let g = morphism(y, &e, g)?;
    let bound = d.unwrap_or(f.source().total_size() + g.source().total_size());
    let pb = pullback(&CoproductMap::from_morphism(f.clone()), &CoproductMap::from_morphism(g.clone()), bound)?;
    let mut table = Table::new(["component", "object", "to_left", "to_right"]);
    let lefts = pb.to_left.parts();
    let rights = pb.to_right.parts();
    for (i, c) in pb.apex.components().iter().enumerate() {
        table.push(vec![
            i.to_string(),
            c.to_string(),
            tuple(lefts[i].1.map().values()),
            tuple(rights[i].1.map().values()),
        ]);
    }
    let pretty = format!(
        "pullback of {f} and {g} with components of size <= {bound}: {} components\n{}",
        pb.apex.len(),
        table.aligned()
    );
    let data = json!({ "f": f, "g": g, "bound": bound, "pullback": pb });
    Report::new(&data, pretty, true)?.with_csv(&table)
}

type SpanArgs<'a> = (&'a Vec<usize>, &'a Vec<usize>, &'a Vec<(usize, usize)>);

fn span_compose(first: SpanArgs, second: SpanArgs, d: usize) -> Result<Report, CliError> {
    let a = SpanClass::from_pairs(object(first.0)?, object(first.1)?, first.2.clone())?;
    let b = SpanClass::from_pairs(object(second.0)?, object(second.1)?, second.2.clone())?;
    let sum = compose(&b, &a, d)?;
    #[derive(Serialize)]
    struct Term {
        coefficient: i64,
        apex: SliceObject,
        pairs: Vec<(usize, usize)>,
    }
    let terms: Vec<Term> = sum
        .terms()
        .iter()
        .map(|(c, &n)| Term { coefficient: n, apex: c.apex(), pairs: c.pairs().to_vec() })
        .collect();
    let mut table = Table::new(["coefficient", "span"]);
    for (c, n) in sum.terms() {
        table.push(vec![n.to_string(), c.to_string()]);
    }
    let pretty = format!("({b}) after ({a}) =\n{}", table.aligned());
    let data = json!({
        "first": a,
        "second": b,
        "bound": d,
        "left_foot": a.left_foot(),
        "right_foot": b.right_foot(),
        "terms": terms,
    });
    Report::new(&data, pretty, true)?.with_csv(&table)
}

fn ring(d: usize, r: usize, caps: Caps, exec: Exec) -> Result<Report, CliError> {
    caps.check("ring", d, RING_CAP)?;
    let ring = build_ring_with(d, r, exec)?;
    let n = ring.rank();
    let mut constants = Table::new(["u", "v", "w", "c"]);
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let c = ring.constant(u, v, w);
                if c != 0 {
                    constants.push(vec![ring.basis_name(u), ring.basis_name(v), ring.basis_name(w), c.to_string()]);
                }
            }
        }
    }
    let mut products = Table::new(["u", "v", "u·v"]);
    for u in 0..n {
        for v in u..n {
            let p = ring
                .mul(&BurnsideElement::basis(n, u), &BurnsideElement::basis(n, v))
                .map_err(CliError::from)?;
            products.push(vec![ring.basis_name(u), ring.basis_name(v), ring.format(&p)]);
        }
    }
    let basis: Vec<String> = (0..n).map(|u| ring.basis_name(u)).collect();
    let pretty = format!(
        "A({d},{r}) has rank {n}, basis {}\n\nproducts\n{}\nmarks\n{}",
        basis.join(" "),
        products.aligned(),
        marks_table(&ring).aligned()
    );
    Report::new(&ring.to_json(), pretty, true)?.with_csv(&constants)
}

fn marks_table(ring: &epi_mackey::burnside::BurnsideRing) -> Table {
    let n = ring.rank();
    let mut t = Table::new(std::iter::once("mark".to_string()).chain((0..n).map(|v| ring.basis_name(v))));
    for u in 0..n {
        let mut row = vec![ring.basis_name(u)];
        row.extend((0..n).map(|v| ring.marks().get(u, v).to_string()));
        t.push(row);
    }
    t
}

fn marks(d: usize, r: usize, caps: Caps, exec: Exec) -> Result<Report, CliError> {
    caps.check("marks", d, RING_CAP)?;
    let ring = build_ring_with(d, r, exec)?;
    let tri = ring.check_triangularity();
    let hom = ring.check_marks_homomorphism_with(exec);
    let pass = tri.pass && hom.pass;
    let pretty = format!(
        "marks of A({d},{r}); entry (u, v) is |Hom(u, v)|\n{}\ntriangular with diagonal {:?}: {}\nmultiplicative on {} triples: {}",
        marks_table(&ring).aligned(),
        tri.diagonal,
        verdict(tri.pass),
        hom.triples,
        verdict(hom.pass)
    );
    let data = json!({
        "d": d,
        "r": r,
        "basis": ring.basis(),
        "marks": ring.marks(),
        "triangularity": tri,
        "homomorphism": hom,
        "pass": pass,
    });
    Ok(Report::new(&data, pretty, pass)?.with_raw_csv(ring.marks_csv()?))
}

fn ideal(d: usize, k: usize, p: Option<u64>, caps: Caps) -> Result<Report, CliError> {
    caps.check("ideal", d, RING_CAP)?;
    let image = ideal_image(d, k, p)?;
    let data = json!({ "d": d, "k": k, "p": p, "generator": image.generator, "image": image.to_string() });
    let joined = p.map(|p| format!("({p}, ")).unwrap_or_default();
    let close = if p.is_some() { ")" } else { "" };
    let pretty = format!("{joined}Φ^[{k}](I({d})){close} = {image}");
    let mut table = Table::new(["d", "k", "p", "generator"]);
    table.push(vec![d.to_string(), k.to_string(), p.map(|p| p.to_string()).unwrap_or_default(), image.generator.to_string()]);
    Report::new(&data, pretty, true)?.with_csv(&table)
}

fn segal(p: u64, caps: Caps) -> Result<Report, CliError> {
    caps.check("segal", p as usize, RING_CAP)?;
    let report = segal_report(p)?;
    let mut table = Table::new(["k", "raw_image", "with_p", "expected", "verdict"]);
    for row in &report.rows {
        table.push(vec![
            row.k.to_string(),
            ideal_name(row.raw_image),
            ideal_name(row.with_p),
            ideal_name(row.expected),
            verdict(row.pass).into(),
        ]);
    }
    let witnesses: Vec<String> = report
        .witnesses
        .iter()
        .map(|w| format!("Surj({p},{}) = {}{}", w.i, w.surjections, if w.divisible { "" } else { " (not divisible)" }))
        .collect();
    let pretty = format!(
        "(p, Φ^[k](I(p))) for p = {p}\n{}\ndivisibility by {p}:\n  {}\nverdict: {}",
        table.aligned(),
        witnesses.join("\n  "),
        verdict(report.pass)
    );
    Report::new(&report, pretty, report.pass)?.with_csv(&table)
}

fn ideal_name(g: u64) -> String {
    match g {
        0 => "0".into(),
        1 => "Z".into(),
        g => format!("{g}Z"),
    }
}

fn axiom_summary(report: &epi_mackey::mackey::AxiomReport) -> String {
    let mut s = format!(
        "identities {}, compositions {}, cospans {}: {}",
        report.identities,
        report.compositions,
        report.cospans,
        verdict(report.pass)
    );
    if let Some(f) = &report.failure {
        s.push_str(&format!("\nfirst failure: {:?} on {}", f.kind, f.morphisms.join(", ")));
    }
    s
}

fn mackey_representable(d: usize, r: usize, at: &[usize], caps: Caps, exec: Exec) -> Result<Report, CliError> {
    caps.check("mackey-representable", d, MACKEY_CAP)?;
    let v = object(at)?;
    let m = representable_with(d, r, &v, exec)?;
    let report = m.check_axioms_with(exec)?;
    let mut table = Table::new(["object", "rank"]);
    for (u, &n) in m.skeleton().objects().iter().zip(m.ranks()) {
        table.push(vec![u.to_string(), n.to_string()]);
    }
    let pretty = format!("representable at {v} in Epi_{{{d},{r}}}\n{}{}", table.aligned(), axiom_summary(&report));
    let data = json!({ "functor": m.to_json(), "axioms": report });
    Report::new(&data, pretty, report.pass)?.with_csv(&table)
}

fn mackey_check(text: &str, caps: Caps, exec: Exec) -> Result<Report, CliError> {
    let m = MackeyData::from_json_str(text)?;
    caps.check("mackey-check", m.d(), MACKEY_CAP)?;
    let report = m.check_axioms_with(exec)?;
    let mut table = Table::new(["identities", "compositions", "cospans", "verdict"]);
    table.push(vec![
        report.identities.to_string(),
        report.compositions.to_string(),
        report.cospans.to_string(),
        verdict(report.pass).into(),
    ]);
    let vanishing: Vec<String> = m.vanishing_locus().iter().map(ToString::to_string).collect();
    let pretty = format!(
        "Mackey data on Epi_{{{},{}}}, ranks {:?}, vanishing at [{}]\n{}",
        m.d(),
        m.r(),
        m.ranks(),
        vanishing.join(" "),
        axiom_summary(&report)
    );
    Report::new(&report, pretty, report.pass)?.with_csv(&table)
}

fn parse_sub(p: &CubePoset, sub: &str) -> Result<SubPoset, CliError> {
    let shape = match sub {
        "truncated" => SubShape::Truncated,
        "full" => SubShape::Full,
        s => match s.strip_prefix("at-least:") {
            Some(n) => SubShape::AtLeast {
                n: n.parse().map_err(|e| CliError::Invalid(format!("bad threshold {n:?}: {e}")))?,
            },
            None => return Err(CliError::Invalid(format!("unknown sub-poset {s:?}"))),
        },
    };
    Ok(SubPoset::new(p, shape)?)
}

struct CubeFlags {
    oracle: bool,
    emit_failing: bool,
    show: bool,
}

fn cube_check(f: &VectDiagram, sub: &str, flags: CubeFlags) -> Result<Report, CliError> {
    let s = parse_sub(f.poset(), sub)?;
    let fast = is_rke_from(f, &s)?;
    let slow = if flags.oracle { Some(is_rke_by_oracle(f, &s)?) } else { None };
    let agree = slow.as_ref().is_none_or(|o| o.pass == fast.pass);
    let mut pretty = format!(
        "{:?} against {sub}: {} elements outside, right Kan extended: {}",
        f.poset().shape(),
        fast.checked,
        if fast.pass { "yes" } else { "no" }
    );
    if flags.emit_failing {
        if let Some(t) = &fast.failing {
            pretty.push_str(&format!("\nfailing cube at {}", tuple(t)));
        }
    }
    if let Some(o) = &slow {
        pretty.push_str(&format!("\noracle: {}, agreement: {}", if o.pass { "yes" } else { "no" }, verdict(agree)));
    }
    let mut data = json!({
        "shape": f.poset().shape(),
        "sub": sub,
        "checked": fast.checked,
        "extended": fast.pass,
    });
    if flags.emit_failing {
        data["failing"] = json!(fast.failing);
    }
    if let Some(o) = &slow {
        data["oracle"] = json!(o.pass);
    }
    if flags.show {
        data["diagram"] = json!(f.to_json());
        let dims: Vec<String> =
            (0..f.poset().len()).map(|x| format!("{}:{}", tuple(f.poset().element(x)), f.dim(x))).collect();
        pretty.push_str(&format!("\ndimensions {}", dims.join(" ")));
    }
    let mut table = Table::new(["extended", "checked", "failing", "oracle"]);
    table.push(vec![
        fast.pass.to_string(),
        fast.checked.to_string(),
        fast.failing.as_deref().map(tuple).unwrap_or_default(),
        slow.map(|o| o.pass.to_string()).unwrap_or_default(),
    ]);
    // a diagram that is not extended is an answer, not a failure; only
    // disagreement with the oracle fails
    Report::new(&data, pretty, agree)?.with_csv(&table)
}

fn pigeonhole(d: usize, r: usize, s: usize) -> Result<Report, CliError> {
    let report = verify_pigeonhole(d, r, s)?;
    let c = &report.counts;
    let mut table = Table::new(["claim", "cases"]);
    table.push(vec!["cross-effect".into(), c.crosseffect.to_string()]);
    table.push(vec!["cross-effect vanishing".into(), c.crosseffect_zero.to_string()]);
    table.push(vec!["diagonal".into(), c.diagonal.to_string()]);
    table.push(vec!["vanishing".into(), c.vanishing.to_string()]);
    table.push(vec!["degenerate direction".into(), c.degenerate.to_string()]);
    let mut pretty = format!("pigeonhole arithmetic for d={d}, r={r}, s={s}\n{}verdict: {}", table.aligned(), verdict(report.pass));
    if let Some(f) = &report.failure {
        pretty.push_str(&format!("\n{f}"));
    }
    Report::new(&report, pretty, report.pass)?.with_csv(&table)
}

fn verify_all(d: usize, caps: Caps, exec: Exec) -> Result<Report, CliError> {
    caps.check("verify-all", d, RING_CAP)?;
    if d == 0 {
        return Err(CliError::Invalid("need d >= 1".into()));
    }
    let primes: Vec<u64> = [2, 3, 5, 7].into_iter().filter(|&p| p as usize <= d).collect();
    let mackey_d = caps.clamp(d, MACKEY_CAP);
    let small = d.min(5);
    let reports = vec![
        suites::segal(&primes)?,
        suites::divisibility(13),
        suites::surjection_counts(10, 8),
        suites::marks_homomorphism(d, 3, exec)?,
        suites::triangularity(d, 3, exec)?,
        suites::c2_sanity()?,
        suites::triple_consistency(small, 2, exec)?,
        suites::representables(mackey_d, 2, exec)?,
        suites::universal_property(mackey_d, exec)?,
        suites::orbitality(small, exec)?,
        suites::cube_oracle(small, 3, 200, exec)?,
        suites::pigeonhole(d)?,
    ];
    let pass = reports.iter().all(|r| r.pass);
    let mut table = Table::new(["suite", "cases", "verdict", "failure"]);
    for r in &reports {
        table.push(vec![r.name.clone(), r.cases.to_string(), verdict(r.pass).into(), r.failure.clone().unwrap_or_default()]);
    }
    let pretty = format!("verification at d = {d}\n{}overall: {}", table.aligned(), verdict(pass));
    let data = json!({ "d": d, "suites": reports, "pass": pass });
    Report::new(&data, pretty, pass)?.with_csv(&table)
}

fn dictionary() -> Result<Report, CliError> {
    let mut table = Table::new(["equivariant", "calculus"]);
    for (a, b) in crate::dictionary::ENTRIES {
        table.push(vec![(*a).into(), (*b).into()]);
    }
    let mut pretty = String::from("equivariant notion -> calculus counterpart\n\n");
    let width = crate::dictionary::ENTRIES.iter().map(|e| e.0.chars().count()).max().unwrap_or(0);
    for (a, b) in crate::dictionary::ENTRIES {
        pretty.push_str(&format!("  {a}{}  {b}\n", " ".repeat(width - a.chars().count())));
    }
    let data: Vec<_> = crate::dictionary::ENTRIES
        .iter()
        .map(|(a, b)| json!({ "equivariant": a, "calculus": b }))
        .collect();
    Report::new(&data, pretty, true)?.with_csv(&table)
}
