//! Restriction of frames, layers and paintings to a face.
//!
//! The structural part does not depend on the ambient set: the frame argument
//! of the layer and painting restrictions only fixes their types. The checked
//! entry points validate side conditions and shapes; [`IndexedNuSet::restr_layer`]
//! additionally realizes the transport between the two frames a layer
//! restriction is typed over as a runtime equality.

use crate::error::IndexedError;
use crate::indexed::set::IndexedNuSet;
use crate::indexed::values::{Frame, Layer, Painting};
use crate::word::Arity;

/// Layers at levels `k < q` of a frame or painting restrict through
/// `restr_layer(ε, q-1, k)`.
pub(crate) fn restr_frame_raw(eps: usize, q: usize, d: &Frame) -> Frame {
    Frame { layers: d.layers.iter().enumerate().map(|(k, l)| restr_layer_raw(eps, q - 1, k, l)).collect() }
}

pub(crate) fn restr_layer_raw(eps: usize, q: usize, p: usize, l: &Layer) -> Layer {
    Layer { components: l.components.iter().map(|c| restr_painting_raw(eps, q, p, c)).collect() }
}

/// At `p = q` this is the `ε` component of the first layer; below, each layer
/// is restricted in turn until level `q` is reached.
pub(crate) fn restr_painting_raw(eps: usize, q: usize, p: usize, c: &Painting) -> Painting {
    let inner = &c.layers[q - p].components[eps];
    let mut layers: Vec<Layer> = (p..q).map(|k| restr_layer_raw(eps, q - 1, k, &c.layers[k - p])).collect();
    layers.extend(inner.layers.iter().cloned());
    Painting { layers, cell: inner.cell }
}

fn check_dir(nu: Arity, eps: usize) -> Result<(), IndexedError> {
    if eps < nu.get() {
        Ok(())
    } else {
        Err(IndexedError::Malformed(format!("direction {eps} out of range for arity {nu}")))
    }
}

fn side(op: &'static str, ok: bool, eps: usize, q: usize, n: usize, p: usize) -> Result<(), IndexedError> {
    if ok {
        Ok(())
    } else {
        Err(IndexedError::SideConditionViolated { op, eps, q, n, p })
    }
}

/// Face `ε` at position `q` of a frame of `(n, p)`, a frame of `(n-1, p)`.
/// Requires `p ≤ q ≤ n-1`.
pub fn restr_frame(nu: Arity, eps: usize, q: usize, n: usize, p: usize, d: &Frame) -> Result<Frame, IndexedError> {
    side("restr_frame", p <= q && q < n, eps, q, n, p)?;
    check_dir(nu, eps)?;
    d.check_shape(nu.get(), n, p)?;
    Ok(restr_frame_raw(eps, q, d))
}

/// Face of a painting of `(n, p)` over `d`, a painting of `(n-1, p)` over
/// `restr_frame(ε, q, n, p, d)`. Requires `p ≤ q ≤ n-1`.
pub fn restr_painting(
    nu: Arity,
    eps: usize,
    q: usize,
    n: usize,
    p: usize,
    d: &Frame,
    c: &Painting,
) -> Result<Painting, IndexedError> {
    side("restr_painting", p <= q && q < n, eps, q, n, p)?;
    check_dir(nu, eps)?;
    d.check_shape(nu.get(), n, p)?;
    c.check_shape(nu.get(), n, p)?;
    Ok(restr_painting_raw(eps, q, p, c))
}

/// Face of a layer of `(n, p)` over `d` inside `set`. See
/// [`IndexedNuSet::restr_layer`].
pub fn restr_layer(
    set: &IndexedNuSet,
    eps: usize,
    q: usize,
    n: usize,
    p: usize,
    d: &Frame,
    l: &Layer,
) -> Result<Layer, IndexedError> {
    set.restr_layer(eps, q, n, p, d, l)
}

impl IndexedNuSet {
    /// Face `ε` at position `q` of a layer `l` of `(n, p)` over `d`, a layer of
    /// `(n-1, p)` over `restr_frame(ε, q+1, n, p, d)`. Requires `p ≤ q ≤ n-2`.
    ///
    /// Component `ω` of the result is computed over
    /// `restr_frame(ε, q, n-1, p, restr_frame(ω, p, n, p, d))` but is expected
    /// over `restr_frame(ω, p, n-1, p, restr_frame(ε, q+1, n, p, d))`; the two
    /// keys are compared before the value is reused. The components of `l` and
    /// of the result are also checked against the fibres of `self`, so a
    /// component sitting over the wrong face is reported here.
    pub fn restr_layer(
        &self,
        eps: usize,
        q: usize,
        n: usize,
        p: usize,
        d: &Frame,
        l: &Layer,
    ) -> Result<Layer, IndexedError> {
        let nu = self.arity();
        side("restr_layer", p <= q && q + 2 <= n, eps, q, n, p)?;
        check_dir(nu, eps)?;
        d.check_shape(nu.get(), n, p)?;
        l.check_shape(nu.get(), n, p)?;
        let expected_base = restr_frame_raw(eps, q + 1, d);
        let mut components = Vec::with_capacity(nu.get());
        for (omega, c) in l.components.iter().enumerate() {
            let over = restr_frame_raw(omega, p, d);
            self.type_painting(n - 1, p, &over, c).map_err(|detail| IndexedError::CoherenceMismatch {
                omega,
                detail: format!("component {c} does not sit over {over}: {detail}"),
            })?;
            let actual = restr_frame_raw(eps, q, &over);
            let expected = restr_frame_raw(omega, p, &expected_base);
            if actual != expected {
                return Err(IndexedError::CoherenceMismatch {
                    omega,
                    detail: format!("frame {actual} differs from {expected}"),
                });
            }
            let r = restr_painting_raw(eps, q, p, c);
            self.type_painting(n - 2, p, &expected, &r).map_err(|detail| IndexedError::CoherenceMismatch {
                omega,
                detail: format!("restricted component {r} does not sit over {expected}: {detail}"),
            })?;
            components.push(r);
        }
        Ok(Layer { components })
    }
}
