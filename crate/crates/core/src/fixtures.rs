//! Small named complexes and maps used by tests, benches and the CLI examples.

use crate::base_cats::{BaseMap, CanonicalObject, Label, Status};
use crate::precubical::{product_of_chains, CellSpec, Hda, PrecubicalSet};

fn statuses(s: &str) -> Vec<Status> {
    s.chars().map(|c| Status::from_symbol(c).expect("status symbol")).collect()
}

/// `(f, ε): (a,b,c) → (a,b,d,c)` terminating `d`, and `(g, ζ): (a,b,d,c) → (a,b,e,d,c)`
/// leaving `e` unstarted.
pub fn conclist_maps() -> (BaseMap, BaseMap) {
    let u = CanonicalObject::from_chars("abc");
    let v = CanonicalObject::from_chars("abdc");
    let w = CanonicalObject::from_chars("abedc");
    let f = BaseMap::new(u, v.clone(), vec![1, 2, 4], statuses("**1*"));
    let g = BaseMap::new(v, w, vec![1, 2, 4, 5], statuses("**0**"));
    (f, g)
}

pub fn single_vertex() -> Hda {
    let x = PrecubicalSet::from_specs([], vec![CellSpec::vertex("v")]).expect("well formed");
    Hda::new(x, "v").expect("vertex")
}

pub fn single_edge(label: &str) -> Hda {
    let specs = vec![CellSpec::vertex("u"), CellSpec::vertex("v"), CellSpec::new("e", &[label], &["u"], &["v"])];
    let x = PrecubicalSet::from_specs([Label::from(label)], specs).expect("well formed");
    Hda::new(x, "u").expect("vertex")
}

fn square_specs(a: &str, b: &str, filled: bool) -> Vec<CellSpec> {
    let mut specs = vec![
        CellSpec::vertex("v00"),
        CellSpec::vertex("v10"),
        CellSpec::vertex("v01"),
        CellSpec::vertex("v11"),
        CellSpec::new("a", &[a], &["v00"], &["v10"]),
        CellSpec::new("b", &[b], &["v00"], &["v01"]),
        CellSpec::new("s", &[a], &["v01"], &["v11"]),
        CellSpec::new("t", &[b], &["v10"], &["v11"]),
    ];
    if filled {
        specs.push(CellSpec::new("x", &[a, b], &["b", "a"], &["t", "s"]));
    }
    specs
}

/// One square `x` with labels `(a, b)` from corner `v00`; edge `a` starts the first
/// event and edge `b` the second.
pub fn filled_square(a: &str, b: &str) -> Hda {
    let x = PrecubicalSet::from_specs([Label::from(a), Label::from(b)], square_specs(a, b, true)).expect("well formed");
    Hda::new(x, "v00").expect("vertex")
}

/// The boundary of [`filled_square`] without its 2-cell.
pub fn hollow_square(a: &str, b: &str) -> Hda {
    let x =
        PrecubicalSet::from_specs([Label::from(a), Label::from(b)], square_specs(a, b, false)).expect("well formed");
    Hda::new(x, "v00").expect("vertex")
}

/// Two one-letter squares `x`, `y` glued along the edge `s`.
pub fn two_squares() -> Hda {
    let a = "a";
    let specs = vec![
        CellSpec::vertex("a"),
        CellSpec::vertex("b"),
        CellSpec::vertex("c"),
        CellSpec::vertex("d"),
        CellSpec::vertex("e"),
        CellSpec::vertex("f"),
        CellSpec::new("p", &[a], &["a"], &["b"]),
        CellSpec::new("q", &[a], &["a"], &["c"]),
        CellSpec::new("s", &[a], &["b"], &["d"]),
        CellSpec::new("t", &[a], &["c"], &["d"]),
        CellSpec::new("u", &[a], &["d"], &["e"]),
        CellSpec::new("v", &[a], &["b"], &["f"]),
        CellSpec::new("l", &[a], &["f"], &["e"]),
        CellSpec::new("x", &[a, a], &["p", "q"], &["t", "s"]),
        CellSpec::new("y", &[a, a], &["v", "s"], &["u", "l"]),
    ];
    let x = PrecubicalSet::from_specs([Label::from(a)], specs).expect("well formed");
    Hda::new(x, "a").expect("vertex")
}

/// Product of chains, one word per chain, one label per character.
pub fn chains(words: &[&str]) -> Hda {
    let chains: Vec<Vec<Label>> =
        words.iter().map(|w| w.chars().map(|c| Label::new(c.to_string())).collect()).collect();
    let x = product_of_chains(&chains);
    let initial = vec!["0"; words.len()].join("_");
    Hda::new(x, &initial).expect("vertex")
}

/// The full 3-cube `a_b_c` (with the given labels) from corner `0_0_0`.
pub fn cube(labels: [&str; 3]) -> Hda {
    chains(&labels)
}

/// Cubes `x = a_b_c` and `z = a_b_d` glued along `y = a_b_1 = δ¹₃x = δ⁰₃z`.
pub fn two_cubes() -> Hda {
    chains(&["a", "b", "cd"])
}

/// The one-letter 3-cube without its 3-cell.
pub fn cube_skeleton() -> Hda {
    let cube = chains(&["a", "a", "a"]);
    let initial = cube.complex.id(cube.initial).to_string();
    Hda::new(cube.complex.skeleton(2), &initial).expect("vertex")
}
