use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::space::{FiniteSpace, GammaSpace, InducedSpace};
use crate::word::Word;

/// An equivariant surjection `φ : Y → X` onto a finite base.
pub trait Extension: Send + Sync {
    type Source: GammaSpace;

    fn source(&self) -> &Self::Source;

    fn base(&self) -> &FiniteSpace;

    fn apply(&self, p: &<Self::Source as GammaSpace>::Point) -> usize;
}

/// `φ(t_iΛ, y) = t_iΛ`.
#[derive(Clone, Debug)]
pub struct InducedProjection<F> {
    space: InducedSpace<F>,
    base: FiniteSpace,
}

impl<F: GammaSpace> InducedProjection<F> {
    pub fn new(space: InducedSpace<F>) -> Self {
        let base = FiniteSpace::from_coset_table(space.table());
        InducedProjection { space, base }
    }
}

impl<F: GammaSpace> Extension for InducedProjection<F> {
    type Source = InducedSpace<F>;

    fn source(&self) -> &InducedSpace<F> {
        &self.space
    }

    fn base(&self) -> &FiniteSpace {
        &self.base
    }

    fn apply(&self, p: &(usize, F::Point)) -> usize {
        p.0
    }
}

/// A point map between finite spaces, checked to be an extension.
#[derive(Clone, Debug)]
pub struct FiniteExtension {
    source: FiniteSpace,
    base: FiniteSpace,
    /// `map[y-1] = φ(y)`.
    map: Vec<usize>,
}

impl FiniteExtension {
    pub fn new(source: FiniteSpace, base: FiniteSpace, map: Vec<usize>) -> Result<Self> {
        let ext = FiniteExtension { source, base, map };
        ext.validate()?;
        Ok(ext)
    }

    /// Builds without validating, so that non-extensions can be reported on.
    pub fn unchecked(source: FiniteSpace, base: FiniteSpace, map: Vec<usize>) -> Self {
        FiniteExtension { source, base, map }
    }

    pub fn identity(base: FiniteSpace) -> Self {
        let map = base.points().collect();
        FiniteExtension { source: base.clone(), base, map }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Checks that the map is total, surjective and commutes with every generator.
    pub fn validate(&self) -> Result<()> {
        if self.source.ambient() != self.base.ambient() {
            return Err(Error::InvalidExtension("source and base live over different groups".into()));
        }
        if self.map.len() != self.source.size() {
            return Err(Error::InvalidExtension(format!("map has {} entries for a source of size {}", self.map.len(), self.source.size())));
        }
        if let Some(&x) = self.map.iter().find(|&&x| x == 0 || x > self.base.size()) {
            return Err(Error::InvalidExtension(format!("image {x} outside the base")));
        }
        let mut hit = vec![false; self.base.size()];
        self.map.iter().for_each(|&x| hit[x - 1] = true);
        if let Some(missing) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidExtension(format!("base point {} has an empty fiber", missing + 1)));
        }
        for l in self.source.ambient().letters() {
            for y in self.source.points() {
                let lhs = self.apply(&self.source.act_letter(l, y));
                let rhs = self.base.act_letter(l, self.apply(&y));
                if lhs != rhs {
                    return Err(Error::InvalidExtension(format!(
                        "not equivariant: φ({}·{y}) = {lhs} but {}·φ({y}) = {rhs}",
                        Word::letter(l),
                        Word::letter(l)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `φ⁻¹(x)`.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        self.source.points().filter(|&y| self.map[y - 1] == x).collect()
    }

    pub fn has_singleton_fibers(&self) -> bool {
        self.base.points().all(|x| self.fiber(x).len() == 1)
    }

    /// `Y × Z` over `X` for a finite group acting on `Z` by `twist`, one permutation per generator.
    pub fn twisted_double(base: &FiniteSpace, twist: &[Perm]) -> Result<FiniteExtension> {
        let n = base.size();
        let m = twist.first().map(Perm::degree).unwrap_or(1);
        let generators = base
            .generator_permutations()
            .iter()
            .zip(twist)
            .map(|(p, z)| Perm::new((0..n * m).map(|k| z.apply(k / n) * n + p.apply(k % n)).collect()))
            .collect::<Result<Vec<_>>>()?;
        let source = FiniteSpace::new(base.ambient().clone(), generators)?;
        FiniteExtension::new(source, base.clone(), (0..n * m).map(|k| k % n + 1).collect())
    }
}

impl Extension for FiniteExtension {
    type Source = FiniteSpace;

    fn source(&self) -> &FiniteSpace {
        &self.source
    }

    fn base(&self) -> &FiniteSpace {
        &self.base
    }

    fn apply(&self, y: &usize) -> usize {
        self.map[y - 1]
    }
}
