//! One function per acceptance criterion. Each returns a short summary on
//! success and a description of the first disagreement on failure.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use sncheck::compliance::{self, ComplianceVerdict, PermKind};
use sncheck::kernel::{BRel, BSet, Universe};
use sncheck::noninterference::{self, CommentOwnership, NiConfig, NiVerdict};
use sncheck::policy_lang::{parse, resolve, BoundScenario, Sort};
use sncheck::smt_emit::{self, Dialect};
use sncheck::snstate::SnState;
use sncheck::vcgen::{self, Env, EnvSpace, ExecOutcome, DEFAULT_MAX_ENVS};

use super::oracle::{self as o, elems, id, pairs, Elems, Pairs};
use super::random;
use super::smt_eval::{Evaluator, Value};

pub type Check = Result<String, String>;

/// Time limits per criterion.
pub const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
pub const KERNEL_LIMIT: Duration = Duration::from_secs(60);
pub const INVARIANT_LIMIT: Duration = Duration::from_secs(120);

pub const KERNEL_RANDOM_CASES: usize = 10_000;
pub const KERNEL_RANDOM_N: usize = 8;
pub const KERNEL_EXHAUSTIVE_MAX_N: usize = 3;
pub const INVARIANT_CASES: usize = 10_000;
pub const INVARIANT_N: usize = 8;
pub const VC_POLICIES: usize = 1_000;
pub const VC_MAX_LEN: usize = 6;
pub const VC_N: usize = 4;
pub const COMPLIANCE_PAIRS: usize = 200;
pub const COMPLIANCE_N: usize = 4;

pub fn scenario_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/scenarios")
        .join(file)
}

pub fn load(file: &str) -> BoundScenario {
    let src = std::fs::read_to_string(scenario_path(file)).expect("scenario file");
    resolve(&parse(&src).expect("parses"), None).expect("resolves")
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(t)
    } else {
        Err(format!("{what} took {t:.2?}, limit {limit:?}"))
    }
}

fn compare_golden(
    file: &str,
    old: &str,
    new: &str,
) -> Result<(ComplianceVerdict, BoundScenario, Duration), String> {
    let start = Instant::now();
    let b = load(file);
    let (oi, ni) = (b.policy_index(old).unwrap(), b.policy_index(new).unwrap());
    let v = compliance::compare(&b, oi, ni, DEFAULT_MAX_ENVS).map_err(|e| e.to_string())?;
    let t = within(start, GOLDEN_LIMIT, file)?;
    Ok((v, b, t))
}

pub fn criterion_1() -> Check {
    let (v, b, t) = compare_golden("comment_breach.snp", "OriginalPolicy", "CommentPolicy")?;
    let c1 = b.names.id(Sort::Content, "c1").unwrap();
    match v {
        ComplianceVerdict::Breach { witness, .. }
            if witness.kind == PermKind::View && witness.content == c1 =>
        {
            let who = b.names.name(Sort::Person, witness.person);
            Ok(format!("BREACH, {who} gains view on c1 ({t:.1?})"))
        }
        other => Err(format!("expected a view breach on c1, got {other:?}")),
    }
}

pub fn criterion_2() -> Check {
    let (v, _, t) = compare_golden("restricted_union.snp", "OldPolicy", "NewPolicy")?;
    match v {
        ComplianceVerdict::Compliant { envs, .. } => {
            Ok(format!("COMPLIANT over {envs} envs ({t:.1?})"))
        }
        other => Err(format!("expected COMPLIANT, got {other:?}")),
    }
}

pub fn criterion_3() -> Check {
    let (v, _, t) = compare_golden("public_reset.snp", "OriginalPolicy", "NewPolicy")?;
    match v {
        ComplianceVerdict::Breach { .. } => Ok(format!("BREACH ({t:.1?})")),
        other => Err(format!("expected BREACH, got {other:?}")),
    }
}

pub fn criterion_4() -> Check {
    let (v, _, t) = compare_golden("plugin_edit.snp", "OldPolicy", "NewPolicy")?;
    match v {
        ComplianceVerdict::Compliant { envs, .. } => {
            Ok(format!("COMPLIANT over {envs} envs ({t:.1?})"))
        }
        other => Err(format!("expected COMPLIANT, got {other:?}")),
    }
}

/// Model values for the `members-<list>` constants of an emitted script.
pub fn members_model(b: &BoundScenario, env: &Env) -> HashMap<String, Value> {
    let n = b.universe.size();
    env.bindings
        .iter()
        .map(|(l, m)| {
            (
                format!("members-{}", b.names.name(Sort::List, *l)),
                Value::from_mask(m.bits() as u64, n),
            )
        })
        .collect()
}

pub fn criterion_5() -> Check {
    let start = Instant::now();
    let b = load("comment_breach.snp");
    let p = b.policy_index("CommentPolicy").unwrap();
    let env = match vcgen::check_all(&b, p, DEFAULT_MAX_ENVS).map_err(|e| e.to_string())? {
        ExecOutcome::Executable { example, .. } => example,
        other => return Err(format!("CommentPolicy not executable: {other:?}")),
    };
    let script = smt_emit::emit_vc_script(&b, p, Dialect::Smtlib2).map_err(|e| e.to_string())?;
    let out = Evaluator::run(&script, members_model(&b, &env))?;
    if !out.satisfied {
        return Err(format!(
            "assertions {:?} evaluate to false",
            out.false_asserts
        ));
    }
    let t = within(start, GOLDEN_LIMIT, "criterion 5")?;
    Ok(format!(
        "executable; emitted script satisfied by ground model ({t:.1?})"
    ))
}

pub fn criterion_6() -> Check {
    let start = Instant::now();
    let b = load("comment_trace.snt");
    let idx = b.policy_index("Shared").unwrap();
    let (initial, ops, _) = noninterference::trace_ops(&b, idx)
        .map_err(|e| e.to_string())?
        .ok_or("no environment")?;
    let person = |s: &str| b.names.id(Sort::Person, s).unwrap();
    let content = |s: &str| b.names.id(Sort::Content, s).unwrap().index();
    let (a, pb) = (person("a"), person("b"));
    let prs: Elems = ["b", "d"].iter().map(|p| person(p).index()).collect();

    // ⟦x₂⟧_a = ⟨{(c_a,a)} ∪ {c_a}×prs ∪ {cmt}×(prs∪{a}), {(c_a,a)} ∪ {cmt}×(prs∪{a})⟩
    let (ca, cmt) = (content("c_a"), content("cmt"));
    let mut audience = prs.clone();
    audience.insert(a.index());
    let base: Pairs = [(ca, a.index())].into_iter().collect();
    let view: Pairs = base
        .iter()
        .copied()
        .chain(o::product(&[ca].into(), &prs))
        .chain(o::product(&[cmt].into(), &audience))
        .collect();
    let edit: Pairs = base
        .iter()
        .copied()
        .chain(o::product(&[cmt].into(), &audience))
        .collect();

    let u = b.universe;
    let default =
        noninterference::check_noninterference(initial, ops.clone(), pb, a, NiConfig::default());
    match &default {
        NiVerdict::Interferes { original, .. } => {
            if pairs(&u, &original.view) != view || pairs(&u, &original.edit) != edit {
                return Err(format!("observation of a differs: {original:?}"));
            }
        }
        other => return Err(format!("expected INTERFERES, got {other:?}")),
    }
    let owner_only = NiConfig {
        comment_ownership: CommentOwnership::OwnerOnly,
        ..NiConfig::default()
    };
    let flipped = noninterference::check_noninterference(initial, ops, pb, a, owner_only);
    if !matches!(flipped, NiVerdict::Clean { .. }) {
        return Err(format!("owner-only: expected CLEAN, got {flipped:?}"));
    }
    let t = within(start, GOLDEN_LIMIT, "criterion 6")?;
    Ok(format!(
        "INTERFERES with matching observation; owner-only CLEAN ({t:.1?})"
    ))
}

/// Compares every kernel operator with the pair-set oracle on one input.
/// Returns the name of the first operator that disagrees.
pub fn kernel_case(u: &Universe, r: &BRel, q: &BRel, s: BSet, t: BSet) -> Result<(), String> {
    let (rp, qp) = (pairs(u, r), pairs(u, q));
    let (se, te) = (elems(s), elems(t));
    let fail = |op: &str| Err(format!("{op} disagrees on r={r:?} q={q:?} s={s:?} t={t:?}"));

    macro_rules! same {
        ($name:expr, $lhs:expr, $rhs:expr) => {
            if ($lhs) != ($rhs) {
                return fail($name);
            }
        };
    }
    same!(
        "set union",
        elems(s.union(t)),
        se.union(&te).copied().collect::<Elems>()
    );
    same!(
        "set intersection",
        elems(s.intersection(t)),
        se.intersection(&te).copied().collect::<Elems>()
    );
    same!(
        "set difference",
        elems(s.difference(t)),
        se.difference(&te).copied().collect::<Elems>()
    );
    same!("set subset", s.is_subset(t), se.is_subset(&te));
    same!("set equal", s == t, se == te);
    same!("set cardinality", s.len(), se.len());
    for e in 0..u.size() {
        same!("set member", s.contains(id(e)), se.contains(&e));
        same!(
            "rel apply",
            elems(r.apply(id(e))),
            o::image(&rp, &[e].into())
        );
        for f in 0..u.size() {
            same!("rel member", r.contains(id(e), id(f)), rp.contains(&(e, f)));
        }
    }
    same!(
        "rel union",
        pairs(u, &r.union(q)),
        rp.union(&qp).copied().collect::<Pairs>()
    );
    same!(
        "rel intersection",
        pairs(u, &r.intersection(q)),
        rp.intersection(&qp).copied().collect::<Pairs>()
    );
    same!(
        "rel difference",
        pairs(u, &r.difference(q)),
        rp.difference(&qp).copied().collect::<Pairs>()
    );
    same!("rel subset", r.is_subset(q), rp.is_subset(&qp));
    same!("rel equal", r == q, rp == qp);
    same!("domain", elems(r.domain()), o::domain(&rp));
    same!("range", elems(r.range()), o::range(&rp));
    same!(
        "domain restriction",
        pairs(u, &r.dom_restrict(s)),
        o::dom_restrict(&se, &rp)
    );
    same!(
        "domain subtraction",
        pairs(u, &r.dom_subtract(s)),
        o::dom_subtract(&se, &rp)
    );
    same!(
        "range restriction",
        pairs(u, &r.ran_restrict(s)),
        o::ran_restrict(&rp, &se)
    );
    same!(
        "range subtraction",
        pairs(u, &r.ran_subtract(s)),
        o::ran_subtract(&rp, &se)
    );
    same!("image", elems(r.image(s)), o::image(&rp, &se));
    same!("composition", pairs(u, &r.compose(q)), o::compose(&rp, &qp));
    same!("identity", pairs(u, &BRel::identity(s)), o::identity(&se));
    same!("inverse", pairs(u, &r.inverse()), o::inverse(&rp));
    same!(
        "override",
        pairs(u, &r.override_with(q)),
        o::override_with(&rp, &qp)
    );
    same!(
        "product",
        pairs(u, &BRel::product(s, t)),
        o::product(&se, &te)
    );
    same!(
        "partial function",
        r.is_partial_function(),
        o::is_partial_function(&rp)
    );
    same!("total on", r.is_total_on(s), o::is_total_on(&rp, &se));
    same!(
        "surjective onto",
        r.is_surjective_onto(t),
        o::is_surjective_onto(&rp, &te)
    );
    Ok(())
}

pub fn criterion_7() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let u = Universe::new(KERNEL_RANDOM_N).unwrap();
    for _ in 0..KERNEL_RANDOM_CASES {
        let (r, q) = (random::rel(&mut rng, &u), random::rel(&mut rng, &u));
        let (s, t) = (random::set(&mut rng, &u), random::set(&mut rng, &u));
        kernel_case(&u, &r, &q, s, t)?;
    }
    let mut exhaustive = 0u64;
    for n in 1..=KERNEL_EXHAUSTIVE_MAX_N {
        let u = Universe::new(n).unwrap();
        let rels: Vec<BRel> = (0..1u32 << (n * n))
            .map(|m| {
                let bits: Vec<bool> = (0..n * n).map(|i| m >> i & 1 == 1).collect();
                u.rel_from_bits(&bits).unwrap()
            })
            .collect();
        let sets: Vec<BSet> = (0..1u16 << n)
            .map(|m| u.set_from_bits(m).unwrap())
            .collect();
        // every relation pair, with the set arguments cycling through all sets
        for (i, r) in rels.iter().enumerate() {
            for (j, q) in rels.iter().enumerate() {
                let s = sets[(i + j) % sets.len()];
                let t = sets[(i * 3 + j) % sets.len()];
                kernel_case(&u, r, q, s, t)?;
                exhaustive += 1;
            }
            for &s in &sets {
                for &t in &sets {
                    kernel_case(&u, r, r, s, t)?;
                    exhaustive += 1;
                }
            }
        }
    }
    let t = within(start, KERNEL_LIMIT, "kernel oracle")?;
    Ok(format!(
        "{KERNEL_RANDOM_CASES} random cases at n={KERNEL_RANDOM_N}, {exhaustive} exhaustive cases at n<={KERNEL_EXHAUSTIVE_MAX_N}, 0 mismatches ({t:.1?})"
    ))
}

pub fn criterion_8() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(8);
    let n = INVARIANT_N;
    let u = Universe::new(n).unwrap();
    let pool = random::state_pool(&mut rng, n, 400, 60);
    for s in &pool {
        if !s.check_invariants().is_empty() || !o::invariant_failures(&u, s).is_empty() {
            return Err(format!("walk produced an invalid state:\n{s}"));
        }
    }
    for kind in random::OP_KINDS {
        let mut done = 0;
        let mut draws = 0u64;
        while done < INVARIANT_CASES {
            draws += 1;
            if draws > 400 * INVARIANT_CASES as u64 {
                return Err(format!("{kind}: only {done} enabled cases found"));
            }
            let s = pool.choose(&mut rng).unwrap();
            let Some(call) = random::enabled_call(&mut rng, n, s, kind, 20) else {
                continue;
            };
            let post = call.apply(s).expect("enabled");
            let lib = post.check_invariants();
            let naive = o::invariant_failures(&u, &post);
            if !lib.is_empty() || !naive.is_empty() {
                return Err(format!(
                    "{kind}: `{call}` breaks {lib:?} / {naive:?} from\n{s}"
                ));
            }
            done += 1;
        }
    }
    let t = within(start, INVARIANT_LIMIT, "invariant preservation")?;
    Ok(format!(
        "{} operations x {INVARIANT_CASES} cases at n={n}, 0 violations ({t:.1?})",
        random::OP_KINDS.len()
    ))
}

/// Parses a generated scenario, or `None` when it does not resolve or needs
/// more content ids than the universe offers.
pub fn generated(src: &str, n: usize) -> Option<BoundScenario> {
    let b = resolve(&parse(src).ok()?, Some(n)).ok()?;
    let env = EnvSpace::new(&b).iter(DEFAULT_MAX_ENVS).ok()?.next()?;
    for p in 0..b.policies.len() {
        vcgen::plan(&b, p, &env).ok()?;
    }
    Some(b)
}

fn header() -> String {
    format!("person {};\n", random::PERSONS.join(", "))
}

pub fn criterion_9() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    let (mut executable, mut failing, mut envs_checked) = (0, 0, 0);
    let mut policies = 0;
    while policies < VC_POLICIES {
        let mut body = if rng.gen_bool(0.3) {
            random::plausible_body(&mut rng, VC_MAX_LEN)
        } else {
            random::policy_body(&mut rng, VC_MAX_LEN)
        };
        if rng.gen_bool(0.5) && !body[0].starts_with("create-account(a, x)") {
            body.insert(0, "create-account(a, x)".into());
            body.truncate(VC_MAX_LEN);
        }
        let src = format!("{}{}", header(), random::render_policy("P", &body));
        let Some(b) = generated(&src, VC_N) else {
            continue;
        };
        policies += 1;
        let space = EnvSpace::new(&b);
        let envs: Vec<Env> = space.iter(DEFAULT_MAX_ENVS).unwrap().collect();
        for (k, env) in envs.iter().enumerate() {
            let plan = vcgen::plan(&b, 0, env).unwrap();
            let reduced = vcgen::reduce(&plan).verdict;
            let literal = vcgen::literal(&plan);
            if reduced.executable != literal.executable
                || reduced.failing_step() != literal.failing_step()
                || reduced.final_state != literal.final_state
            {
                return Err(format!(
                    "literal and reduction disagree on\n{src}\nunder {env:?}"
                ));
            }
            envs_checked += 1;
            if k == 0 {
                if reduced.executable {
                    executable += 1;
                } else {
                    failing += 1;
                }
                let script = smt_emit::emit_vc_script(&b, 0, Dialect::Smtlib2).unwrap();
                let out = Evaluator::run(&script, members_model(&b, env))
                    .map_err(|e| format!("evaluator: {e}\n{src}"))?;
                if out.satisfied != reduced.executable {
                    return Err(format!(
                        "emitted script says {} but reduction says {} on\n{src}",
                        out.satisfied, reduced.executable
                    ));
                }
            }
        }
    }
    if executable == 0 || failing == 0 {
        return Err(format!(
            "degenerate sample: {executable} executable, {failing} not"
        ));
    }
    Ok(format!(
        "{policies} policies (len<={VC_MAX_LEN}, n={VC_N}), {envs_checked} envs, {executable} executable / {failing} not, 0 disagreements"
    ))
}

const ASSUMPTIONS: [&str; 6] = [
    "assume l subset-of m;",
    "assume not subset-of(l, m);",
    "assume b subset-of l;",
    "assume not subset-of(a, l);",
    "assume not subset-of(m, l);",
    "assume c subset-of m;",
];

/// Membership of `list` under `env`; lists that no policy creates are empty.
fn member(env: &HashMap<&str, Elems>, list: &str) -> Elems {
    env.get(list).cloned().unwrap_or_default()
}

fn assumption_holds(b: &BoundScenario, env: &HashMap<&str, Elems>, a: &str) -> bool {
    let person = |p: &str| -> Elems { [b.names.id(Sort::Person, p).unwrap().index()].into() };
    let (l, m) = (member(env, "l"), member(env, "m"));
    match a {
        "assume l subset-of m;" => l.is_subset(&m),
        "assume not subset-of(l, m);" => !l.is_subset(&m),
        "assume b subset-of l;" => person("b").is_subset(&l),
        "assume not subset-of(a, l);" => !person("a").is_subset(&l),
        "assume not subset-of(m, l);" => !m.is_subset(&l),
        "assume c subset-of m;" => person("c").is_subset(&m),
        other => unreachable!("{other}"),
    }
}

/// `(kind, content, person)` triples.
type Leaks = BTreeSet<(PermKind, usize, usize)>;

#[derive(Debug, PartialEq, Eq)]
enum Expected {
    Vacuous,
    Inexecutable,
    /// Breaching environments in enumeration order, with their leaks.
    Breach(Vec<(Env, Leaks)>),
    Compliant,
}

fn leaks(
    u: &Universe,
    old: &SnState,
    new: &SnState,
    protected: &Elems,
) -> BTreeSet<(PermKind, usize, usize)> {
    let n = u.size();
    let mut out = BTreeSet::new();
    for (kind, a, b) in [
        (
            PermKind::View,
            u.rel_bits(&old.viewp),
            u.rel_bits(&new.viewp),
        ),
        (
            PermKind::Edit,
            u.rel_bits(&old.editp),
            u.rel_bits(&new.editp),
        ),
    ] {
        for k in 0..n * n {
            if b[k] && !a[k] && protected.contains(&(k / n)) {
                out.insert((kind, k / n, k % n));
            }
        }
    }
    out
}

/// Exhaustive reference verdict: every assignment of the created lists,
/// filtered by the assumptions, then a raw mask comparison.
fn brute_force(b: &BoundScenario, assumptions: &[&str], old_body: &[String]) -> Expected {
    let u = b.universe;
    let mut persons: Vec<usize> = random::PERSONS
        .iter()
        .map(|p| b.names.id(Sort::Person, p).unwrap().index())
        .collect();
    persons.sort();
    let mut created: Vec<&str> = random::LISTS
        .iter()
        .copied()
        .filter(|l| {
            b.policies
                .iter()
                .flat_map(|p| &p.body)
                .any(|i| i.source.starts_with(&format!("create-list({l},")))
        })
        .collect();
    // enumeration order: lists by id, first list most significant
    created.sort_by_key(|l| b.names.id(Sort::List, l).unwrap());
    let protected: Elems = random::CONTENTS
        .iter()
        .filter(|c| {
            old_body.iter().any(|i| {
                i.split(|ch: char| !(ch.is_alphanumeric() || ch == '_'))
                    .any(|w| w == **c)
            })
        })
        .map(|c| b.names.id(Sort::Content, c).unwrap().index())
        .collect();
    let width = persons.len();
    let mut admissible = Vec::new();
    for code in 0..1usize << (width * created.len()) {
        let mut env: HashMap<&str, Elems> = HashMap::new();
        let mut bindings = Vec::new();
        for (k, l) in created.iter().enumerate() {
            let shift = width * (created.len() - 1 - k);
            let mask = code >> shift & ((1 << width) - 1);
            let members: Elems = (0..width)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| persons[j])
                .collect();
            let lid = b.names.id(Sort::List, l).unwrap();
            bindings.push((lid, o::to_bset(&u, &members)));
            env.insert(l, members);
        }
        if assumptions.iter().all(|a| assumption_holds(b, &env, a)) {
            bindings.sort();
            admissible.push(Env { bindings });
        }
    }
    if admissible.is_empty() {
        return Expected::Vacuous;
    }
    let mut finals = Vec::new();
    for env in &admissible {
        let run = |p: usize| {
            vcgen::reduce(&vcgen::plan(b, p, env).unwrap())
                .verdict
                .final_state
        };
        match (run(0), run(1)) {
            (Some(so), Some(sn)) => finals.push((env.clone(), so, sn)),
            _ => return Expected::Inexecutable,
        }
    }
    let breaching: Vec<_> = finals
        .into_iter()
        .map(|(e, so, sn)| (e, leaks(&u, &so, &sn, &protected)))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if breaching.is_empty() {
        Expected::Compliant
    } else {
        Expected::Breach(breaching)
    }
}

pub fn criterion_10() -> Check {
    let mut rng = StdRng::seed_from_u64(10);
    let mut counts: HashMap<&str, usize> = HashMap::new();
    let mut done = 0;
    while done < COMPLIANCE_PAIRS {
        let gen_body = |rng: &mut StdRng| -> Vec<String> {
            if rng.gen_bool(0.8) {
                return random::plausible_body(rng, 6);
            }
            let mut body: Vec<String> = vec!["create-account(a, x)".into()];
            body.extend(
                random::policy_body(rng, 5)
                    .into_iter()
                    .filter(|i| !i.starts_with("add-to-list")),
            );
            body
        };
        let old = gen_body(&mut rng);
        let new = gen_body(&mut rng);
        let k = rng.gen_range(0..=2);
        let assumptions: Vec<&str> = ASSUMPTIONS.choose_multiple(&mut rng, k).copied().collect();
        let src = format!(
            "universe {COMPLIANCE_N};\n{}{}\n{}{}",
            header(),
            assumptions.join("\n"),
            random::render_policy("Old", &old),
            random::render_policy("New", &new)
        );
        let Some(b) = generated(&src, COMPLIANCE_N) else {
            continue;
        };
        if EnvSpace::new(&b).free_lists().len() > 2 {
            continue;
        }
        done += 1;
        let got = compliance::compare(&b, 0, 1, DEFAULT_MAX_ENVS).map_err(|e| e.to_string())?;
        let want = brute_force(&b, &assumptions, &old);
        let agree = match (&got, &want) {
            (ComplianceVerdict::Vacuous, Expected::Vacuous) => true,
            (ComplianceVerdict::Inexecutable { .. }, Expected::Inexecutable) => true,
            (ComplianceVerdict::Compliant { .. }, Expected::Compliant) => true,
            (ComplianceVerdict::Breach { witness, .. }, Expected::Breach(envs)) => {
                let (env, found) = &envs[0];
                *env == witness.env
                    && found.contains(&(
                        witness.kind,
                        witness.content.index(),
                        witness.person.index(),
                    ))
            }
            _ => false,
        };
        if !agree {
            return Err(format!(
                "compare gave {got:?}, brute force {want:?} on\n{src}"
            ));
        }
        let key = match want {
            Expected::Vacuous => "vacuous",
            Expected::Inexecutable => "inexecutable",
            Expected::Breach(_) => "breach",
            Expected::Compliant => "compliant",
        };
        *counts.entry(key).or_default() += 1;
    }
    let mut summary: Vec<String> = counts.iter().map(|(k, v)| format!("{v} {k}")).collect();
    summary.sort();
    Ok(format!(
        "{done} pairs at n={COMPLIANCE_N}: {}",
        summary.join(", ")
    ))
}
