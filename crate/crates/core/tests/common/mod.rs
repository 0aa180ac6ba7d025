//! Random ologs, instances and functor towers built through the public API,
//! and the property checks run both by `cargo test` and by the acceptance
//! harness.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use olog::{
    dsl, AspectLabel, AuthorSet, CatFunctor, Fact, Instance, LinguisticStructure, NounPhrase, Olog,
    Path, PathCategory, PathEquality, TypeLabel, VerbPhrase, DEFAULT_BOUND,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

const AUTHORS: [&str; 3] = ["A", "B", "C"];

fn subset(bits: u8) -> AuthorSet {
    AUTHORS
        .iter()
        .enumerate()
        .filter(|(i, _)| bits & (1 << i) != 0)
        .map(|(_, a)| *a)
        .collect()
}

/// Draws from a byte stream, cycling when it runs out.
pub struct Seeds<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Seeds<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Seeds { bytes, at: 0 }
    }

    pub fn next(&mut self) -> u8 {
        let b = self
            .bytes
            .get(self.at % self.bytes.len().max(1))
            .copied()
            .unwrap_or(0);
        self.at += 1;
        b
    }

    pub fn below(&mut self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            self.next() as usize % n
        }
    }
}

/// Every path of length at most `max_len`, identities included.
pub fn paths_upto(cat: &PathCategory, max_len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = cat.objects().map(|o| Path::identity(o.clone())).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            let end = cat.target(p).unwrap();
            for g in cat.generators().filter(|g| g.source == end) {
                let mut arrows = p.arrows().to_vec();
                arrows.push(g.id.clone());
                next.push(Path::new(p.source(), arrows));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Size parameters and a seed stream for a small random olog.
#[derive(Clone, Debug)]
pub struct Shape {
    pub objects: usize,
    pub generators: usize,
    pub equations: usize,
    pub seeds: Vec<u8>,
}

pub fn arb_shape(
    max_objects: usize,
    max_generators: usize,
    max_equations: usize,
) -> impl Strategy<Value = Shape> {
    (
        1..=max_objects,
        0..=max_generators,
        0..=max_equations,
        prop::collection::vec(any::<u8>(), 64),
    )
        .prop_map(|(objects, generators, equations, seeds)| Shape {
            objects,
            generators,
            equations,
            seeds,
        })
}

const VERBS: [&str; 6] = [
    "has",
    "includes",
    "is",
    "yields as w",
    "lives at",
    "was born in",
];

/// A valid olog of the given shape. Each fact equates two distinct parallel
/// paths of length at most 2; with `maximal_facts` its authors are everyone
/// endorsing both sides, otherwise a random subset of them.
pub fn build_olog(shape: &Shape, maximal_facts: bool) -> Olog {
    let mut s = Seeds::new(&shape.seeds);
    let mut cat = PathCategory::new();
    let mut structure = LinguisticStructure::default();
    let mut type_bits = Vec::new();
    for i in 0..shape.objects {
        let id = format!("o{i}");
        cat.add_object(id.clone()).unwrap();
        let bits = s.next() & 7;
        type_bits.push(bits);
        structure.type_labels.insert(
            id,
            TypeLabel {
                noun: NounPhrase::new(&format!("a thing {i}")).unwrap(),
                authors: subset(bits),
            },
        );
    }
    for i in 0..shape.generators {
        let (a, b) = (s.below(shape.objects), s.below(shape.objects));
        let id = format!("g{i}");
        cat.add_generator(id.clone(), format!("o{a}"), format!("o{b}"))
            .unwrap();
        let bits = type_bits[a] & type_bits[b] & s.next();
        structure.aspect_labels.insert(
            id,
            AspectLabel {
                verb: VerbPhrase::atomic(VERBS[s.below(VERBS.len())]).unwrap(),
                authors: subset(bits),
            },
        );
    }
    let mut o = Olog::new("random", cat, structure);

    let paths = paths_upto(&o.category, 2);
    let mut pairs = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for q in &paths[i + 1..] {
            if o.category.endpoints(p).unwrap() == o.category.endpoints(q).unwrap() {
                pairs.push((p.clone(), q.clone()));
            }
        }
    }
    for k in 0..shape.equations {
        if pairs.is_empty() {
            break;
        }
        let (lhs, rhs) = pairs[s.below(pairs.len())].clone();
        let both = o
            .derived_authors(&lhs)
            .unwrap()
            .intersect(&o.derived_authors(&rhs).unwrap());
        let authors = if maximal_facts {
            both
        } else {
            both.intersect(&subset(s.next()))
        };
        let fact = Fact {
            id: format!("E{k}"),
            lhs,
            rhs,
            authors,
        };
        o = o.with_fact(&fact).unwrap();
    }
    o
}

/// A total instance on `o` with one to three tokens per type; facts need not
/// hold.
pub fn build_instance(o: &Olog, seeds: &[u8]) -> Instance {
    let mut s = Seeds::new(seeds);
    let mut i = Instance::new();
    for obj in o.category.objects() {
        let n = 1 + s.below(3);
        i.tokens
            .insert(obj.clone(), (0..n).map(|k| format!("{obj}.{k}")).collect());
    }
    for g in o.category.generators() {
        let targets: Vec<String> = i.tokens_of(&g.target).iter().cloned().collect();
        let table = i
            .tokens_of(&g.source)
            .iter()
            .map(|x| (x.clone(), targets[s.below(targets.len())].clone()))
            .collect();
        i.functions.insert(g.id.clone(), table);
    }
    i
}

fn err(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(err(format!($($fmt)*)));
        }
    };
}

fn pick<'a>(paths: &'a [Path], s: &mut Seeds) -> &'a Path {
    &paths[s.below(paths.len())]
}

/// Facts derived by reflexivity, symmetry, transitivity and whiskering are
/// valid whenever the facts they come from are.
pub fn congruence_laws(shape: &Shape) -> Result<(), TestCaseError> {
    let o = build_olog(shape, false);
    ensure!(
        o.validate().is_empty(),
        "generated olog invalid: {}",
        o.validate()
    );
    let mut s = Seeds::new(&shape.seeds[32..]);
    let paths = paths_upto(&o.category, 3);
    let ok = |f: &Fact| -> Result<(), TestCaseError> {
        let r = o.check_fact(f, DEFAULT_BOUND);
        ensure!(r.is_empty(), "{} ~ {}: {r}", f.lhs, f.rhs);
        Ok(())
    };

    for _ in 0..4 {
        ok(&Fact::identity(&o, pick(&paths, &mut s)).unwrap())?;
    }
    let facts: Vec<Fact> = o
        .category
        .equations()
        .map(|e| o.fact(&e.id).unwrap())
        .collect();
    for f in &facts {
        ok(f)?;
        ok(&f.reversed())?;
        ok(&f.then(&f.reversed()).unwrap())?;
        ok(&f.reversed().then(f).unwrap())?;
        for g in &facts {
            if let Ok(fg) = f.then(g) {
                ok(&fg)?;
            }
            if let Ok(fg) = f.reversed().then(g) {
                ok(&fg)?;
            }
        }
        let (x, y) = o.category.endpoints(&f.lhs).unwrap();
        for p in paths.iter().filter(|p| p.len() <= 2) {
            let (a, b) = o.category.endpoints(p).unwrap();
            if a == y {
                ok(&f.beside(&Fact::identity(&o, p).unwrap(), &o).unwrap())?;
            }
            if b == x {
                ok(&Fact::identity(&o, p).unwrap().beside(f, &o).unwrap())?;
            }
        }
        for g in &facts {
            if let Ok(fg) = f.beside(g, &o) {
                ok(&fg)?;
            }
        }
    }
    Ok(())
}

/// Composing with an identity changes neither the derived label nor its
/// authors, and unit verbs vanish under concatenation.
pub fn unit_laws(shape: &Shape) -> Result<(), TestCaseError> {
    let o = build_olog(shape, false);
    let cat = &o.category;
    for p in paths_upto(cat, 3) {
        let (a, b) = cat.endpoints(&p).unwrap();
        let d = o.derived_aspect(&p).unwrap();
        let right = cat.compose(&p, &Path::identity(b.clone())).unwrap();
        let left = cat.compose(&Path::identity(a.clone()), &p).unwrap();
        ensure!(
            o.derived_aspect(&right).unwrap() == d,
            "right unit fails at {p}"
        );
        ensure!(
            o.derived_aspect(&left).unwrap() == d,
            "left unit fails at {p}"
        );

        let v = d.verb.normalized();
        let (na, nb) = (o.noun(&a).unwrap(), o.noun(&b).unwrap());
        ensure!(
            v.then(nb, &VerbPhrase::Unit) == v,
            "verb right unit fails at {p}"
        );
        ensure!(
            VerbPhrase::Unit.then(na, &v) == v,
            "verb left unit fails at {p}"
        );
        ensure!(v.normalized() == v, "normalization not idempotent at {p}");
    }
    Ok(())
}

/// Evaluation sends identities to identities and composites to composites.
pub fn instance_functoriality(shape: &Shape) -> Result<(), TestCaseError> {
    let o = build_olog(shape, false);
    let i = build_instance(&o, &shape.seeds[16..]);
    let cat = &o.category;
    let paths = paths_upto(cat, 2);
    for p in &paths {
        let (a, b) = cat.endpoints(p).unwrap();
        for x in i.tokens_of(&a) {
            let px = i.evaluate(p, x).unwrap();
            ensure!(
                i.tokens_of(&b).contains(&px),
                "{p} leaves its target at {x}"
            );
            ensure!(
                i.evaluate(&Path::identity(a.clone()), x).unwrap() == *x,
                "identity moves {x}"
            );
            for q in paths.iter().filter(|q| q.source() == b) {
                let pq = cat.compose(p, q).unwrap();
                let lhs = i.evaluate(&pq, x).unwrap();
                let rhs = i.evaluate(q, &px).unwrap();
                ensure!(lhs == rhs, "{pq} at {x}: {lhs} != {rhs}");
            }
        }
    }
    Ok(())
}

/// All single rewrites of `p`, by substring replacement on generator ids.
fn rewrites(cat: &PathCategory, p: &Path) -> Vec<Path> {
    let word = p.arrows();
    let mut before = vec![p.source().to_string()];
    for a in word {
        before.push(cat.generator(a).unwrap().target.clone());
    }
    let mut out = Vec::new();
    for eq in cat.equations() {
        for (from, to) in [(&eq.lhs, &eq.rhs), (&eq.rhs, &eq.lhs)] {
            let n = from.len();
            for i in 0..=word.len().saturating_sub(n) {
                if i + n > word.len()
                    || before[i] != from.source()
                    || word[i..i + n] != *from.arrows()
                {
                    continue;
                }
                let mut w = word[..i].to_vec();
                w.extend_from_slice(to.arrows());
                w.extend_from_slice(&word[i + n..]);
                out.push(Path::new(p.source(), w));
            }
        }
    }
    out
}

const ORACLE_CAP: usize = 20_000;

/// Breadth-first rewrite distances from `p` up to `depth`, or `None` once
/// more than `ORACLE_CAP` paths are reached.
fn oracle_ball(cat: &PathCategory, p: &Path, depth: usize) -> Option<HashMap<Path, usize>> {
    let mut dist = HashMap::from([(p.clone(), 0)]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        if d == depth {
            continue;
        }
        for n in rewrites(cat, &w) {
            if !dist.contains_key(&n) {
                dist.insert(n.clone(), d + 1);
                queue.push_back(n);
                if dist.len() > ORACLE_CAP {
                    return None;
                }
            }
        }
    }
    Some(dist)
}

/// `path_equal` at the default bound agrees with a one-sided breadth-first
/// search of the rewrite graph on every parallel pair of paths up to length
/// 4. Returns how many pairs were compared.
pub fn path_equal_oracle(shape: &Shape) -> Result<usize, TestCaseError> {
    let o = build_olog(shape, true);
    let cat = &o.category;
    let paths = paths_upto(cat, 4);
    let mut s = Seeds::new(&shape.seeds[40..]);
    let mut compared = 0;
    let mut starts: HashSet<usize> = HashSet::new();
    for _ in 0..3 {
        starts.insert(s.below(paths.len()));
    }
    for &k in &starts {
        let p = &paths[k];
        let Some(ball) = oracle_ball(cat, p, DEFAULT_BOUND) else {
            continue;
        };
        let ends = cat.endpoints(p).unwrap();
        for q in paths.iter().filter(|q| cat.endpoints(q).unwrap() == ends) {
            let got = cat.path_equal(p, q, DEFAULT_BOUND).unwrap() == PathEquality::Equal;
            let want = ball.contains_key(q);
            ensure!(
                got == want,
                "{p} vs {q}: path_equal says {got}, search says {want}"
            );
            compared += 1;
        }
    }
    Ok(compared)
}

/// Random composable functors `B -> C -> D` and an instance on `D`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub d: Olog,
    pub c: PathCategory,
    pub g: CatFunctor,
    pub b: PathCategory,
    pub f: CatFunctor,
    pub j: Instance,
}

pub fn arb_tower() -> impl Strategy<Value = Tower> {
    (arb_shape(3, 4, 2), prop::collection::vec(any::<u8>(), 96)).prop_map(|(shape, seeds)| {
        let d = build_olog(&shape, true);
        let mut s = Seeds::new(&seeds);
        let (c, g) = lift(&d.category, &mut s);
        let (b, f) = lift(&c, &mut s);
        let j = build_instance(&d, &seeds[48..]);
        Tower { d, c, g, b, f, j }
    })
}

/// A category over `below` with a functor into it. Generators map to paths of
/// length at most 2; some come in twins with the same image and an equation
/// between them, so the functor preserves every equation by construction.
fn lift(below: &PathCategory, s: &mut Seeds) -> (PathCategory, CatFunctor) {
    let below_objects: Vec<String> = below.objects().cloned().collect();
    let below_paths = paths_upto(below, 2);
    let mut cat = PathCategory::new();
    let mut f = CatFunctor {
        object_map: BTreeMap::new(),
        generator_map: BTreeMap::new(),
    };
    let n = 1 + s.below(3);
    for i in 0..n {
        let id = format!("x{i}");
        cat.add_object(id.clone()).unwrap();
        f.object_map
            .insert(id, below_objects[s.below(below_objects.len())].clone());
    }
    for k in 0..s.below(4) {
        let (a, b) = (format!("x{}", s.below(n)), format!("x{}", s.below(n)));
        let ends = (f.object_map[&a].clone(), f.object_map[&b].clone());
        let images: Vec<&Path> = below_paths
            .iter()
            .filter(|p| below.endpoints(p).unwrap() == ends)
            .collect();
        if images.is_empty() {
            continue;
        }
        let image = images[s.below(images.len())].clone();
        let id = format!("y{k}");
        cat.add_generator(id.clone(), a.clone(), b.clone()).unwrap();
        f.generator_map.insert(id.clone(), image.clone());
        if s.next().is_multiple_of(3) {
            let twin = format!("{id}t");
            cat.add_generator(twin.clone(), a.clone(), b).unwrap();
            f.generator_map.insert(twin.clone(), image);
            cat.add_equation(
                format!("T{k}"),
                Path::new(a.clone(), [id]),
                Path::new(a, [twin]),
            )
            .unwrap();
        }
    }
    (cat, f)
}

/// Pulling back along a composite equals pulling back twice, and pulling back
/// along an identity changes nothing.
pub fn pullback_laws(t: &Tower) -> Result<(), TestCaseError> {
    use olog::mapping::{pullback_instance, pullback_olog, pullback_structure};
    let fg = t.f.then(&t.g).unwrap();
    let via_c = pullback_olog(&t.g, &t.c, &t.d, "C").unwrap();
    let once = pullback_structure(&fg, &t.b, &t.d).unwrap();
    let twice = pullback_structure(&t.f, &t.b, &via_c).unwrap();
    ensure!(once.type_labels == twice.type_labels, "type labels differ");
    ensure!(
        once.aspect_labels == twice.aspect_labels,
        "aspect labels differ"
    );
    ensure!(
        once.fact_authors == twice.fact_authors,
        "fact authors differ"
    );

    let id = CatFunctor::identity(&t.d.category);
    ensure!(
        pullback_structure(&id, &t.d.category, &t.d).unwrap() == t.d.structure,
        "identity pullback changes the structure"
    );

    let once = pullback_instance(&fg, &t.b, &t.d.category, &t.j).unwrap();
    let k = pullback_instance(&t.g, &t.c, &t.d.category, &t.j).unwrap();
    let twice = pullback_instance(&t.f, &t.b, &t.c, &k).unwrap();
    ensure!(once.tokens == twice.tokens, "token sets differ");
    ensure!(once.functions == twice.functions, "functions differ");
    ensure!(
        pullback_instance(&id, &t.d.category, &t.d.category, &t.j).unwrap() == t.j,
        "identity pullback changes the instance"
    );
    Ok(())
}

/// Printable text with the characters the serializer must escape.
fn awkward_text() -> impl Strategy<Value = String> {
    "[a-z \"\\\\,{}#=:;\\[\\]~@-]{1,12}"
        .prop_map(|s| s.trim().to_string())
        .prop_filter("nonempty", |s| !s.is_empty())
}

/// An olog with awkward nouns, verbs and author names, as a document.
pub fn arb_document() -> impl Strategy<Value = dsl::OlogDocument> {
    (
        arb_shape(4, 5, 2),
        prop::collection::vec(awkward_text(), 12),
        prop::collection::vec(awkward_text(), 3),
        "[a-z \"\\\\]{0,10}",
    )
        .prop_map(|(shape, words, authors, name)| {
            let mut o = build_olog(&shape, false);
            let rename = |a: &AuthorSet| -> AuthorSet {
                a.iter()
                    .map(|x| authors[AUTHORS.iter().position(|y| y == x).unwrap()].clone())
                    .collect::<std::collections::BTreeSet<String>>()
                    .iter()
                    .map(String::as_str)
                    .collect()
            };
            o.name = name;
            let mut k = 0;
            for label in o.structure.type_labels.values_mut() {
                label.noun = NounPhrase::new(&format!("an {}", words[k % words.len()])).unwrap();
                label.authors = rename(&label.authors);
                k += 1;
            }
            for label in o.structure.aspect_labels.values_mut() {
                let w = &words[k % words.len()];
                label.verb = if w.len() % 5 == 0 {
                    VerbPhrase::Unit
                } else {
                    VerbPhrase::atomic(w).unwrap()
                };
                label.authors = rename(&label.authors);
                k += 1;
            }
            for a in o.structure.fact_authors.values_mut() {
                *a = rename(a);
            }
            dsl::OlogDocument::from_olog(&o)
        })
}

/// Serializing then parsing returns the canonical form, and serializing is a
/// fixpoint from then on.
pub fn dsl_round_trip(doc: &dsl::OlogDocument) -> Result<(), TestCaseError> {
    let text = dsl::serialize_olog(doc);
    let back = dsl::parse_olog(&text).map_err(|e| err(format!("{e}\n{text}")))?;
    ensure!(
        back == doc.canonical(),
        "round trip changed the document:\n{text}"
    );
    ensure!(
        dsl::serialize_olog(&back) == text,
        "serialization not a fixpoint:\n{text}"
    );
    let o = back.to_olog().map_err(|e| err(e.to_string()))?;
    ensure!(
        dsl::OlogDocument::from_olog(&o) == back,
        "olog conversion changed the document"
    );
    Ok(())
}

/// Round trips every olog and mapping fixture; returns how many.
pub fn fixture_round_trips() -> Result<usize, String> {
    let mut n = 0;
    let mut entries: Vec<_> = std::fs::read_dir(fixtures())
        .map_err(|e| e.to_string())?
        .flatten()
        .map(|e| e.path())
        .collect();
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path);
        match path.extension().and_then(|e| e.to_str()) {
            Some("olog") => {
                let doc = dsl::parse_olog(&text.unwrap())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                dsl_round_trip(&doc).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Some("map") => {
                let doc = dsl::parse_mapping(&text.unwrap())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let again = dsl::serialize_mapping(&doc);
                if dsl::parse_mapping(&again).as_ref() != Ok(&doc) {
                    return Err(format!("{}: mapping round trip failed", path.display()));
                }
            }
            _ => continue,
        }
        n += 1;
    }
    Ok(n)
}
