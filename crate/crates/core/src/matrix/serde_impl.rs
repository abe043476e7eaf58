//! JSON wire format: `{"rows": n, "cols": m, "data": [[re, im], ...]}`,
//! row-major. Real entries may be written as bare numbers on input.

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ComplexMatrix, C64};

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        let mut st = serializer.serialize_struct("ComplexMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("data", &pairs)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(deserializer)?;
        let data = w
            .data
            .into_iter()
            .map(|e| match e {
                Entry::Real(r) => C64::new(r, 0.0),
                Entry::Complex([re, im]) => C64::new(re, im),
            })
            .collect::<Vec<_>>();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(D::Error::custom("matrix entries must be finite"));
        }
        ComplexMatrix::from_vec(w.rows, w.cols, data).map_err(D::Error::custom)
    }
}
