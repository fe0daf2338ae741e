//! Symmetric derivative data keyed by multiset index.
//!
//! A `DerivativeTensor` holds every partial derivative of one scalar
//! component up to a fixed order, one entry per multiset index (symmetry is
//! structural: there is no way to store ∂_{12} and ∂_{21} separately). A
//! `MapJet` bundles the tensors of all components of a map together with the
//! base point they were taken at.

use std::collections::HashMap;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::jsonutil::{as_array, as_object, as_str, as_usize, field};
use crate::multiset::{enumerate_bag, MultisetIndex};
use crate::scalar::Scalar;

/// All partial derivatives of one scalar quantity at one point, complete for
/// every multiset index with |α| <= order. The order-zero entry is the value
/// itself.
#[derive(Clone, PartialEq, Debug)]
pub struct DerivativeTensor<S: Scalar> {
    dim: usize,
    order: usize,
    entries: HashMap<MultisetIndex, S>,
}

impl<S: Scalar> DerivativeTensor<S> {
    /// Fills every index level by level from a closure.
    pub fn from_fn(dim: usize, order: usize, mut f: impl FnMut(&MultisetIndex) -> S) -> Self {
        assert!(dim >= 1, "carrier dimension must be positive");
        let mut entries = HashMap::new();
        for n in 0..=order {
            for idx in enumerate_bag(dim, n) {
                let v = f(&idx);
                entries.insert(idx, v);
            }
        }
        DerivativeTensor {
            dim,
            order,
            entries,
        }
    }

    /// Validates a prebuilt entry map: exactly one value per index up to
    /// `order`, nothing else.
    pub fn try_new(
        dim: usize,
        order: usize,
        entries: HashMap<MultisetIndex, S>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                what: "tensor dimension",
                found: 0,
            });
        }
        let mut expected = 0usize;
        for n in 0..=order {
            for idx in enumerate_bag(dim, n) {
                expected += 1;
                if !entries.contains_key(&idx) {
                    return Err(Error::Schema {
                        context: format!("missing tensor entry for index {idx}"),
                    });
                }
            }
        }
        if entries.len() != expected {
            return Err(Error::Schema {
                context: format!(
                    "tensor has {} entries, expected {expected} for dim {dim} order {order}",
                    entries.len()
                ),
            });
        }
        Ok(DerivativeTensor {
            dim,
            order,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The order-zero entry.
    pub fn value(&self) -> &S {
        self.entries
            .get(&MultisetIndex::empty(self.dim))
            .expect("tensor is complete")
    }

    /// Looks up one derivative; rejects indices from the wrong carrier or
    /// beyond the stored order.
    pub fn entry(&self, index: &MultisetIndex) -> Result<&S> {
        if index.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "tensor index carrier",
                expected: self.dim,
                found: index.dim(),
            });
        }
        if index.cardinality() > self.order {
            return Err(Error::InsufficientOrder {
                input: "tensor",
                order: self.order,
                needed: index.cardinality(),
            });
        }
        Ok(self.entries.get(index).expect("tensor is complete"))
    }

    /// Entries in canonical order: ascending |α|, then the bag enumeration
    /// order within each level.
    pub fn iter_canonical(&self) -> impl Iterator<Item = (MultisetIndex, &S)> + '_ {
        (0..=self.order)
            .flat_map(move |n| enumerate_bag(self.dim, n))
            .map(move |idx| {
                let v = self.entries.get(&idx).expect("tensor is complete");
                (idx, v)
            })
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("dim".into(), Value::from(self.dim as u64));
        obj.insert("order".into(), Value::from(self.order as u64));
        obj.insert("mode".into(), Value::String(S::MODE.as_str().into()));
        let entries: Vec<Value> = self
            .iter_canonical()
            .map(|(idx, v)| {
                let mut e = Map::new();
                e.insert("index".into(), idx.to_json());
                e.insert("value".into(), v.to_json());
                Value::Object(e)
            })
            .collect();
        obj.insert("entries".into(), Value::Array(entries));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        as_object(v, "derivative tensor")?;
        let dim = as_usize(field(v, "dim")?, "dim")?;
        let order = as_usize(field(v, "order")?, "order")?;
        let mode = as_str(field(v, "mode")?, "mode")?;
        if mode != S::MODE.as_str() {
            return Err(Error::Schema {
                context: format!("mode \"{mode}\" does not match expected \"{}\"", S::MODE),
            });
        }
        if dim == 0 {
            return Err(Error::InvalidDimension {
                what: "tensor dimension",
                found: 0,
            });
        }
        let mut entries = HashMap::new();
        for entry in as_array(field(v, "entries")?, "entries")? {
            let idx = MultisetIndex::from_json(field(entry, "index")?)?;
            if idx.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "tensor entry index",
                    expected: dim,
                    found: idx.dim(),
                });
            }
            let value = S::from_json(field(entry, "value")?)?;
            if entries.insert(idx.clone(), value).is_some() {
                return Err(Error::Schema {
                    context: format!("duplicate tensor entry for index {idx}"),
                });
            }
        }
        DerivativeTensor::try_new(dim, order, entries)
    }
}

/// Derivative tensors for every component of a map g: R^in_dim -> R^out_dim
/// at a common base point.
#[derive(Clone, PartialEq, Debug)]
pub struct MapJet<S: Scalar> {
    base_point: Vec<S>,
    components: Vec<DerivativeTensor<S>>,
}

impl<S: Scalar> MapJet<S> {
    pub fn new(base_point: Vec<S>, components: Vec<DerivativeTensor<S>>) -> Result<Self> {
        if base_point.is_empty() {
            return Err(Error::InvalidDimension {
                what: "jet input dimension",
                found: 0,
            });
        }
        if components.is_empty() {
            return Err(Error::InvalidDimension {
                what: "jet output dimension",
                found: 0,
            });
        }
        let in_dim = base_point.len();
        let order = components[0].order();
        for t in &components {
            if t.dim() != in_dim {
                return Err(Error::DimensionMismatch {
                    context: "jet component carrier",
                    expected: in_dim,
                    found: t.dim(),
                });
            }
            if t.order() != order {
                return Err(Error::IncompatibleEnumerations {
                    reason: format!(
                        "jet components disagree on order: {} vs {}",
                        order,
                        t.order()
                    ),
                });
            }
        }
        Ok(MapJet {
            base_point,
            components,
        })
    }

    /// Jet of the identity map at `base_point`: first derivatives form the
    /// unit matrix, all higher derivatives vanish.
    pub fn identity(order: usize, base_point: Vec<S>) -> Result<Self> {
        let dim = base_point.len();
        if dim == 0 {
            return Err(Error::InvalidDimension {
                what: "jet input dimension",
                found: 0,
            });
        }
        let components = (1..=dim)
            .map(|b| {
                let value = base_point[b - 1].clone();
                DerivativeTensor::from_fn(dim, order, |idx| {
                    if idx.is_empty() {
                        value.clone()
                    } else if idx.cardinality() == 1 && idx.multiplicity_of(b) == 1 {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
            })
            .collect();
        MapJet::new(base_point, components)
    }

    pub fn in_dim(&self) -> usize {
        self.base_point.len()
    }

    pub fn out_dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    pub fn base_point(&self) -> &[S] {
        &self.base_point
    }

    pub fn components(&self) -> &[DerivativeTensor<S>] {
        &self.components
    }

    /// Component tensor for the 1-based output coordinate `b`.
    pub fn component(&self, b: usize) -> &DerivativeTensor<S> {
        &self.components[b - 1]
    }

    /// Values of all components at the base point, i.e. the image point.
    pub fn image_point(&self) -> Vec<S> {
        self.components.iter().map(|t| t.value().clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("in_dim".into(), Value::from(self.in_dim() as u64));
        obj.insert("out_dim".into(), Value::from(self.out_dim() as u64));
        obj.insert("order".into(), Value::from(self.order() as u64));
        obj.insert(
            "base_point".into(),
            Value::Array(self.base_point.iter().map(|x| x.to_json()).collect()),
        );
        obj.insert(
            "components".into(),
            Value::Array(self.components.iter().map(|t| t.to_json()).collect()),
        );
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        as_object(v, "map jet")?;
        let in_dim = as_usize(field(v, "in_dim")?, "in_dim")?;
        let out_dim = as_usize(field(v, "out_dim")?, "out_dim")?;
        let order = as_usize(field(v, "order")?, "order")?;
        let base_json = as_array(field(v, "base_point")?, "base_point")?;
        if base_json.len() != in_dim {
            return Err(Error::DimensionMismatch {
                context: "jet base point length",
                expected: in_dim,
                found: base_json.len(),
            });
        }
        let base_point = base_json
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<S>>>()?;
        let comp_json = as_array(field(v, "components")?, "components")?;
        if comp_json.len() != out_dim {
            return Err(Error::DimensionMismatch {
                context: "jet component count",
                expected: out_dim,
                found: comp_json.len(),
            });
        }
        let components = comp_json
            .iter()
            .map(DerivativeTensor::from_json)
            .collect::<Result<Vec<_>>>()?;
        let jet = MapJet::new(base_point, components)?;
        if jet.order() != order {
            return Err(Error::IncompatibleEnumerations {
                reason: format!(
                    "declared order {order} but components store order {}",
                    jet.order()
                ),
            });
        }
        Ok(jet)
    }
}
