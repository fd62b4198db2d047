//! Named example extensions with `m = n = 1`.

use crate::extension::ExtensionData;
use crate::format::InputDocument;

type M2 = [[i64; 2]; 2];

const ID: M2 = [[1, 0], [0, 1]];

/// `(name, A1, A2, c12, expected classification)`.
const ENTRIES: &[(&str, M2, M2, [i64; 2], &str)] = &[
    ("TORUS", ID, ID, [0, 0], "torus"),
    (
        "HYPER2",
        [[-1, 0], [0, -1]],
        ID,
        [1, 0],
        "torus-quotient(order 2)",
    ),
    (
        "HYPER3",
        [[0, -1], [1, -1]],
        ID,
        [1, 0],
        "torus-quotient(order 3)",
    ),
    (
        "HYPER4",
        [[0, -1], [1, 0]],
        ID,
        [1, 0],
        "torus-quotient(order 4)",
    ),
    (
        "HYPER6",
        [[1, -1], [1, 0]],
        ID,
        [1, 0],
        "torus-quotient(order 6)",
    ),
    (
        "KODAIRA",
        ID,
        ID,
        [1, 0],
        "rejected((d): extension class has infinite order)",
    ),
    (
        "HEIS",
        ID,
        ID,
        [0, 1],
        "rejected((d): extension class has infinite order)",
    ),
    (
        "DIAG-FAIL",
        [[-1, 0], [0, 1]],
        ID,
        [0, 0],
        "rejected((c): no invariant complex structure on the fiber)",
    ),
];

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub data: ExtensionData,
    /// Classification the pipeline must report.
    pub expected: &'static str,
}

impl Example {
    pub fn document(&self) -> InputDocument {
        InputDocument::named(self.name, self.data.clone())
    }
}

fn rows(m: &M2) -> [&[i64]; 2] {
    [&m[0], &m[1]]
}

fn make(&(name, a1, a2, c, expected): &(&'static str, M2, M2, [i64; 2], &'static str)) -> Example {
    let tails: Vec<((usize, usize), &[i64])> = if c == [0, 0] {
        vec![]
    } else {
        vec![((0, 1), &c[..])]
    };
    let data = ExtensionData::from_i64(1, 1, &[&rows(&a1), &rows(&a2)], &tails)
        .expect("catalog entries are well formed");
    Example {
        name,
        data,
        expected,
    }
}

pub fn examples() -> Vec<Example> {
    ENTRIES.iter().map(make).collect()
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// Case-insensitive lookup.
pub fn example(name: &str) -> Option<Example> {
    ENTRIES
        .iter()
        .find(|e| e.0.eq_ignore_ascii_case(name))
        .map(make)
}
