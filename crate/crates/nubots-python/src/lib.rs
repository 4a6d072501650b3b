use pyo3::prelude::*;

#[pymodule]
fn nubots_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
