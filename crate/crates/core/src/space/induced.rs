use std::sync::Arc;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::perm::Perm;
use crate::space::{split_pair, Cylinder, FiniteSpace, GammaSpace};
use crate::word::Word;

/// A point `(t_iΛ, y)` of the induced space.
pub type InducedPoint<P> = (usize, P);

/// `Γ/Λ × Y` with `γ·(t_iΛ, y) = (γ t_i α(γ,i) Λ, α(γ,i)⁻¹ y)`.
///
/// The fiber is a space over the same ambient group, of which only the
/// subgroup Λ is ever asked to act.
#[derive(Clone, Debug)]
pub struct InducedSpace<F> {
    table: Arc<CosetTable>,
    fiber: F,
}

impl<F: GammaSpace> InducedSpace<F> {
    pub fn new(table: Arc<CosetTable>, fiber: F) -> Result<Self> {
        if fiber.ambient() != table.ambient() {
            return Err(Error::InvalidSpace("fiber and coset table live over different groups".into()));
        }
        Ok(InducedSpace { table, fiber })
    }

    pub fn table(&self) -> &Arc<CosetTable> {
        &self.table
    }

    pub fn fiber(&self) -> &F {
        &self.fiber
    }

    pub fn index(&self) -> usize {
        self.table.index()
    }

    /// Same as [`GammaSpace::act`] with the cocycle value exposed.
    pub fn act_with_cocycle(&self, g: &Word, (i, y): &InducedPoint<F::Point>) -> Result<(InducedPoint<F::Point>, Word)> {
        let lambda = self.table.cocycle_checked(g, *i)?;
        let j = self.table.act(g, *i);
        let y = self.fiber.act(&lambda.inverse(), y)?;
        Ok(((j, y), lambda))
    }
}

impl InducedSpace<FiniteSpace> {
    /// The induced space as a finite space, numbering `(i, y)` as
    /// `(i-1)·m + y`, together with the projection to `Γ/Λ`.
    pub fn flatten(&self) -> Result<(FiniteSpace, Vec<usize>)> {
        let (n, m) = (self.index(), self.fiber.size());
        let number = |(i, y): (usize, usize)| (i - 1) * m + y;
        let generators = self
            .ambient()
            .generators()
            .map(|g| {
                let images = (1..=n)
                    .flat_map(|i| (1..=m).map(move |y| (i, y)))
                    .map(|p| Ok(number(self.act(&g, &p)?) - 1))
                    .collect::<Result<Vec<_>>>()?;
                Perm::new(images)
            })
            .collect::<Result<Vec<_>>>()?;
        let space = FiniteSpace::new(self.ambient().clone(), generators)?;
        Ok((space, (1..=n).flat_map(|i| std::iter::repeat_n(i, m)).collect()))
    }
}

impl<F: GammaSpace> GammaSpace for InducedSpace<F> {
    type Point = InducedPoint<F::Point>;

    fn ambient(&self) -> &GroupContext {
        self.table.ambient()
    }

    fn act(&self, g: &Word, p: &Self::Point) -> Result<Self::Point> {
        Ok(self.act_with_cocycle(g, p)?.0)
    }

    fn cylinder(&self, (i, y): &Self::Point, depth: usize) -> Cylinder {
        Cylinder::Fiber(*i, Box::new(self.fiber.cylinder(y, depth)))
    }

    fn cylinder_count(&self, depth: usize) -> Option<u128> {
        self.fiber.cylinder_count(depth)?.checked_mul(self.index() as u128)
    }

    fn format_point(&self, (i, y): &Self::Point) -> String {
        format!("({i}, {})", self.fiber.format_point(y))
    }

    fn parse_point(&self, s: &str) -> Result<Self::Point> {
        let (i, rest) = split_pair(s)?;
        self.table.check_coset(i).map_err(|_| Error::BadPoint(format!("coset {i} out of range in {s:?}")))?;
        Ok((i, self.fiber.parse_point(rest)?))
    }
}
