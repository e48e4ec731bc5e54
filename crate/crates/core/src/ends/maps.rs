//! Maps between samples and the maps they induce on sequences.

use std::sync::Arc;

use serde::Serialize;

use crate::chains::NeighborSearch;
use crate::error::{Error, Result};
use crate::metric::{MetricSpaceSample, PointId};
use crate::sequences::CoarseSequencePrefix;
use crate::{within, TOLERANCE};

/// A total map from the points of one sample to the points of another.
#[derive(Debug, Clone)]
pub struct SampledMap {
    domain: Arc<MetricSpaceSample>,
    codomain: Arc<MetricSpaceSample>,
    image: Vec<PointId>,
}

impl SampledMap {
    pub fn new(
        domain: Arc<MetricSpaceSample>,
        codomain: Arc<MetricSpaceSample>,
        image: Vec<PointId>,
    ) -> Result<Self> {
        if image.len() != domain.len() {
            return Err(Error::InvalidMap(format!(
                "image has {} entries for {} domain points",
                image.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&q| !codomain.contains(q)) {
            return Err(Error::UnknownPoint(bad));
        }
        Ok(SampledMap {
            domain,
            codomain,
            image,
        })
    }

    pub fn identity(sample: Arc<MetricSpaceSample>) -> Self {
        let image = (0..sample.len()).collect();
        SampledMap {
            domain: sample.clone(),
            codomain: sample,
            image,
        }
    }

    /// Applies `f` to coordinates and snaps each result to the nearest
    /// codomain point, which must lie within the codomain resolution.
    pub fn from_coords<F>(
        domain: Arc<MetricSpaceSample>,
        codomain: Arc<MetricSpaceSample>,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let image = domain
            .points()
            .iter()
            .map(|p| {
                let target = f(&p.coords);
                let (q, d) = codomain.nearest(&target)?;
                if d > codomain.resolution() + TOLERANCE {
                    return Err(Error::InvalidMap(format!(
                        "image of point {} lands {d} from the codomain sample",
                        p.id
                    )));
                }
                Ok(q)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, image)
    }

    pub fn domain(&self) -> &Arc<MetricSpaceSample> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<MetricSpaceSample> {
        &self.codomain
    }

    pub fn apply(&self, p: PointId) -> PointId {
        self.image[p]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &SampledMap) -> Result<SampledMap> {
        if !Arc::ptr_eq(&self.codomain, &then.domain) {
            return Err(Error::MismatchedSamples);
        }
        Ok(SampledMap {
            domain: self.domain.clone(),
            codomain: then.codomain.clone(),
            image: self.image.iter().map(|&q| then.image[q]).collect(),
        })
    }

    /// Largest codomain distance between the two images of a domain point.
    /// Maps at finite distance are close.
    pub fn sup_distance(&self, other: &SampledMap) -> Result<f64> {
        if !Arc::ptr_eq(&self.domain, &other.domain)
            || !Arc::ptr_eq(&self.codomain, &other.codomain)
        {
            return Err(Error::MismatchedSamples);
        }
        Ok(self
            .image
            .iter()
            .zip(&other.image)
            .map(|(&a, &b)| self.codomain.dist(a, b))
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Modulus {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreimageRadius {
    pub radius: f64,
    pub preimage_radius: f64,
}

/// Empirical bornology and properness moduli of a sampled map.
#[derive(Debug, Clone, Serialize)]
pub struct ModuliReport {
    pub empirical: bool,
    pub moduli: Vec<Modulus>,
    pub properness: Vec<PreimageRadius>,
    /// Set when the preimage of a ball no larger than half the codomain
    /// window already reaches the edge of the domain window.
    pub properness_flagged: bool,
}

/// For each `N`, `M(N)` is the largest image distance over domain pairs at
/// distance at most `N`. For each radius `r` in the same list, the
/// preimage of `B(f(x0), r)` is measured by its largest distance from `x0`.
pub fn check_bornologous_proper(map: &SampledMap, n_list: &[f64]) -> Result<ModuliReport> {
    super::validate_grid("N list", n_list, true)?;
    let (dom, cod) = (&map.domain, &map.codomain);
    let all: Vec<PointId> = (0..dom.len()).collect();
    let moduli = n_list
        .iter()
        .map(|&n| {
            let mut m: f64 = 0.0;
            crate::chains::grid::for_each_edge(dom, &all, n, NeighborSearch::Grid, |i, j| {
                m = m.max(cod.dist(map.image[i], map.image[j]));
            });
            Modulus { n, m }
        })
        .collect();

    let center = map.image[dom.basepoint()];
    let properness: Vec<PreimageRadius> = n_list
        .iter()
        .map(|&r| PreimageRadius {
            radius: r,
            preimage_radius: all
                .iter()
                .filter(|&&p| within(cod.dist(center, map.image[p]), r))
                .map(|&p| dom.dist_to_base(p))
                .fold(0.0, f64::max),
        })
        .collect();
    let edge = dom.window_radius() - dom.resolution() - TOLERANCE;
    let properness_flagged = properness
        .iter()
        .any(|p| p.radius <= cod.window_radius() / 2.0 && p.preimage_radius >= edge);
    Ok(ModuliReport {
        empirical: true,
        moduli,
        properness,
        properness_flagged,
    })
}

/// Pointwise image of `s`. The image is based when `f(x0)` is the codomain
/// basepoint and unbased otherwise.
pub fn induced_map(map: &SampledMap, s: &CoarseSequencePrefix) -> Result<CoarseSequencePrefix> {
    if !Arc::ptr_eq(s.sample(), &map.domain) {
        return Err(Error::MismatchedSamples);
    }
    let terms: Vec<PointId> = s.terms().iter().map(|&p| map.image[p]).collect();
    if terms[0] == map.codomain.basepoint() {
        CoarseSequencePrefix::new(map.codomain.clone(), terms)
    } else {
        CoarseSequencePrefix::unbased(map.codomain.clone(), terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate_space, SpaceSpec};

    fn line(w: f64) -> Arc<MetricSpaceSample> {
        Arc::new(generate_space(&SpaceSpec::line(w, 1.0)).unwrap())
    }

    fn doubling(w: f64) -> SampledMap {
        SampledMap::from_coords(line(w), line(2.0 * w), |c| vec![2.0 * c[0]]).unwrap()
    }

    #[test]
    fn identity_moduli() {
        let f = SampledMap::identity(line(50.0));
        let r = check_bornologous_proper(&f, &[1.0, 2.0, 5.0]).unwrap();
        for m in &r.moduli {
            assert_eq!(m.m, m.n);
        }
        assert!(!r.properness_flagged);
    }

    #[test]
    fn doubling_moduli() {
        let r = check_bornologous_proper(&doubling(50.0), &[1.0, 2.0, 5.0]).unwrap();
        for m in &r.moduli {
            assert_eq!(m.m, 2.0 * m.n);
        }
        assert_eq!(r.properness[2].preimage_radius, 2.0);
        assert!(!r.properness_flagged);
    }

    #[test]
    fn constant_map_is_flagged() {
        let x = line(50.0);
        let f = SampledMap::new(x.clone(), x.clone(), vec![x.basepoint(); x.len()]).unwrap();
        let r = check_bornologous_proper(&f, &[1.0, 2.0]).unwrap();
        assert!(r.properness_flagged);
        assert_eq!(r.properness[0].preimage_radius, 50.0);
    }

    #[test]
    fn induced_sequences() {
        let f = doubling(50.0);
        let x = f.domain().clone();
        let ids = (0..=10).map(|i| x.find(&[i as f64]).unwrap()).collect();
        let s = CoarseSequencePrefix::new(x.clone(), ids).unwrap();
        let img = induced_map(&f, &s).unwrap();
        assert!(img.based());
        assert_eq!(img.chain_bound(), 2.0);
        let y = f.codomain();
        let xs: Vec<f64> = img.terms().iter().map(|&p| y.coords(p)[0]).collect();
        assert_eq!(xs, (0..=10).map(|i| 2.0 * i as f64).collect::<Vec<_>>());

        let id = SampledMap::identity(x.clone());
        assert_eq!(induced_map(&id, &s).unwrap().terms(), s.terms());
    }

    #[test]
    fn composition_requires_matching_samples() {
        let f = doubling(10.0);
        let g = doubling(10.0);
        assert!(matches!(f.then(&g), Err(Error::MismatchedSamples)));
        let id = SampledMap::identity(f.codomain().clone());
        let h = f.then(&id).unwrap();
        assert_eq!(h.sup_distance(&f).unwrap(), 0.0);
    }

    #[test]
    fn wrong_image_length() {
        let x = line(5.0);
        assert!(SampledMap::new(x.clone(), x, vec![0]).is_err());
    }
}
