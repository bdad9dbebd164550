use serde::{Deserialize, Serialize};

/// Role of a ring variable. Only used for reporting and for choosing which
/// variables count towards equivariant degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarClass {
    Equivariant,
    SymplecticWeight,
    Kahler,
    Loop,
    Spectral,
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub class: VarClass,
}

/// Ordered set of ring variables. Polynomials store exponents by position in
/// this table, so the order is fixed for the lifetime of a computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarTable {
    vars: Vec<Var>,
}

/// Fixed positions of the shared variables in [`VarTable::standard`].
pub mod idx {
    pub const HBAR: usize = 0;
    pub const Z: usize = 1;
    pub const Q: usize = 2;
    pub const U: usize = 3;
    pub const EPS: usize = 4;
    pub const T1: usize = 5;
    pub const T2: usize = 6;
    /// Index of `a1`; `a_i` lives at `A0 + i - 1`.
    pub const A0: usize = 7;

    pub const fn a(i: usize) -> usize {
        A0 + i - 1
    }
}

impl VarTable {
    pub fn new(vars: Vec<Var>) -> Self {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            assert!(seen.insert(v.name.clone()), "duplicate variable {}", v.name);
        }
        VarTable { vars }
    }

    /// The layout shared by every computation in the crate:
    /// `hbar, z, q, u, eps, t1, t2, a1, ..., an`.
    ///
    /// The framing variables come last so tables for different `n` agree on
    /// every common index.
    pub fn standard(n: usize) -> Self {
        use VarClass::*;
        let mut vars = vec![
            Var::new("hbar", SymplecticWeight),
            Var::new("z", Kahler),
            Var::new("q", Loop),
            Var::new("u", Spectral),
            Var::new("eps", Auxiliary),
            Var::new("t1", Equivariant),
            Var::new("t2", Equivariant),
        ];
        for i in 1..=n {
            vars.push(Var::new(&format!("a{i}"), Equivariant));
        }
        VarTable::new(vars)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn class(&self, i: usize) -> VarClass {
        self.vars[i].class
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }
}

impl Var {
    pub fn new(name: &str, class: VarClass) -> Self {
        Var {
            name: name.to_string(),
            class,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_layout_is_prefix_stable() {
        let t3 = VarTable::standard(3);
        let t5 = VarTable::standard(5);
        for i in 0..t3.len() {
            assert_eq!(t3.name(i), t5.name(i));
        }
        assert_eq!(t5.index_of("a4"), Some(idx::a(4)));
        assert_eq!(t3.index_of("hbar"), Some(idx::HBAR));
    }

    #[test]
    #[should_panic]
    fn duplicate_names_rejected() {
        VarTable::new(vec![
            Var::new("x", VarClass::Auxiliary),
            Var::new("x", VarClass::Auxiliary),
        ]);
    }
}
