//! Python bindings: groups, character tables, spectra and the theorem
//! checks, plus the JSON job runner used by the command-line tool.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cayley_spectra::characters::{character_table, CharacterTable as CoreTable};
use cayley_spectra::galois::{is_power_closed, subgroup_closure, trivial_subgroup, unit_group, GaloisSubgroup};
use cayley_spectra::group::{conjugacy_classes, ClassData, Group as CoreGroup, GroupSpec};
use cayley_spectra::job::{run, JobSpec};
use cayley_spectra::oracle::{adjacency_matrix, compare_spectra, floating_eigenvalues, DEFAULT_TOLERANCE};
use cayley_spectra::spectra::{
    all_eigenvalues_integral, check_theorem1, check_theorem2, eigenvalues_via_characters, make_connection_set,
    ConnectionSet, ConnectionSpec, Spectrum as CoreSpectrum,
};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite group with its conjugacy classes and character table.
///
/// `spec` is a family name such as `"symmetric(4)"`, a product
/// `"cyclic(2) x cyclic(4)"`, or a JSON group description.
#[pyclass(frozen, module = "cayley_spectra_py")]
struct Group {
    spec: GroupSpec,
    group: CoreGroup,
    classes: ClassData,
    table: CoreTable,
}

impl Group {
    fn connection(&self, classes: Option<Vec<usize>>, elements: Option<Vec<usize>>) -> PyResult<ConnectionSet> {
        let spec = match (classes, elements) {
            (Some(c), None) => ConnectionSpec::Classes(c),
            (None, Some(e)) => ConnectionSpec::Elements(e),
            (None, None) => ConnectionSpec::AllNonIdentity,
            (Some(_), Some(_)) => return Err(value_error("give either classes or elements, not both")),
        };
        make_connection_set(&spec, &self.group, &self.classes).map_err(value_error)
    }

    fn gamma(&self, gamma: &Bound<'_, PyAny>) -> PyResult<GaloisSubgroup> {
        let m = self.group.exponent();
        if let Ok(name) = gamma.extract::<String>() {
            return match name.as_str() {
                "rational" => Ok(unit_group(m)),
                "splitting" => Ok(trivial_subgroup(m)),
                other => Err(value_error(format!("unknown field shorthand `{other}`"))),
            };
        }
        let gens: Vec<i64> = gamma.extract()?;
        subgroup_closure(m, &gens).map_err(value_error)
    }
}

#[pymethods]
impl Group {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let parsed = match serde_json::from_str::<serde_json::Value>(spec) {
            Ok(v) => GroupSpec::from_json(&v),
            Err(_) => GroupSpec::parse(spec),
        }
        .map_err(value_error)?;
        let group = CoreGroup::build(&parsed).map_err(value_error)?;
        let classes = conjugacy_classes(&group);
        let table = character_table(&group, &classes).map_err(value_error)?;
        Ok(Group {
            spec: parsed,
            group,
            classes,
            table,
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.group.order()
    }

    #[getter]
    fn exponent(&self) -> u64 {
        self.group.exponent()
    }

    #[getter]
    fn num_classes(&self) -> usize {
        self.classes.num_classes()
    }

    fn is_abelian(&self) -> bool {
        self.group.is_abelian()
    }

    /// Element indices of every conjugacy class; class 0 is the identity.
    fn classes(&self) -> Vec<Vec<usize>> {
        (0..self.classes.num_classes())
            .map(|j| self.classes.class(j).to_vec())
            .collect()
    }

    /// Cycle notation of an element.
    fn element(&self, index: usize) -> PyResult<String> {
        if index >= self.group.order() {
            return Err(value_error(format!("element {index} out of range")));
        }
        Ok(self.group.element(index).to_string())
    }

    fn character_table(&self) -> CharacterTable {
        CharacterTable {
            table: self.table.clone(),
        }
    }

    /// Spectrum of `Cay(G, C)` with `C` given by class indices or element
    /// indices (default: every non-identity element).
    #[pyo3(signature = (classes=None, elements=None))]
    fn spectrum(&self, classes: Option<Vec<usize>>, elements: Option<Vec<usize>>) -> PyResult<Spectrum> {
        let c = self.connection(classes, elements)?;
        Ok(Spectrum {
            spectrum: eigenvalues_via_characters(&c, &self.table, &self.classes),
        })
    }

    /// Compares the character-formula spectrum with the eigenvalues of the
    /// explicit adjacency matrix.
    #[pyo3(signature = (classes=None, elements=None, tolerance=DEFAULT_TOLERANCE))]
    fn matches_adjacency_matrix(
        &self,
        classes: Option<Vec<usize>>,
        elements: Option<Vec<usize>>,
        tolerance: f64,
    ) -> PyResult<bool> {
        let c = self.connection(classes, elements)?;
        let sp = eigenvalues_via_characters(&c, &self.table, &self.classes);
        let a = adjacency_matrix(&self.group, c.elements()).map_err(value_error)?;
        let eig = floating_eigenvalues(&a).map_err(value_error)?;
        Ok(compare_spectra(&sp, &eig, tolerance).map_err(value_error)?.pass)
    }

    fn is_power_closed(&self, elements: Vec<usize>) -> PyResult<bool> {
        if let Some(&bad) = elements.iter().find(|&&x| x >= self.group.order()) {
            return Err(value_error(format!("element {bad} out of range")));
        }
        Ok(is_power_closed(&elements, &self.group))
    }

    #[pyo3(signature = (classes=None, elements=None))]
    fn check_theorem1<'py>(
        &self,
        py: Python<'py>,
        classes: Option<Vec<usize>>,
        elements: Option<Vec<usize>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let c = self.connection(classes, elements)?;
        let r = check_theorem1(&self.group, &self.classes, &c, &self.table).map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("integral", r.integral)?;
        d.set_item("power_closed", r.power_closed)?;
        d.set_item("agree", r.agree)?;
        d.set_item("witness_character", r.witness_character)?;
        d.set_item("witness_elements", r.witness_elements)?;
        Ok(d)
    }

    /// `gamma` is `"rational"`, `"splitting"` or a list of generators of a
    /// subgroup of the units modulo the exponent.
    #[pyo3(signature = (gamma, classes=None, elements=None))]
    fn check_theorem2<'py>(
        &self,
        py: Python<'py>,
        gamma: &Bound<'py, PyAny>,
        classes: Option<Vec<usize>>,
        elements: Option<Vec<usize>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let h = self.gamma(gamma)?;
        let c = self.connection(classes, elements)?;
        let r = check_theorem2(&self.group, &self.classes, &c, &self.table, &h).map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("gamma", h.elements().to_vec())?;
        d.set_item("in_field", r.in_field)?;
        d.set_item("union_of_gamma_classes", r.union_of_gamma_classes)?;
        d.set_item("agree", r.agree)?;
        d.set_item("witness_character", r.witness_character)?;
        d.set_item("witness_class", r.witness_class)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Group('{}', order={})", self.spec, self.group.order())
    }
}

/// Exact character table with cyclotomic values modulo the group exponent.
#[pyclass(frozen, module = "cayley_spectra_py")]
struct CharacterTable {
    table: CoreTable,
}

#[pymethods]
impl CharacterTable {
    fn degrees(&self) -> Vec<u64> {
        self.table.degrees().to_vec()
    }

    /// Values as exact strings in powers of a primitive root of unity.
    fn values(&self) -> Vec<Vec<String>> {
        (0..self.table.num_characters())
            .map(|chi| self.table.row(chi).iter().map(ToString::to_string).collect())
            .collect()
    }

    fn approx(&self) -> Vec<Vec<Complex64>> {
        (0..self.table.num_characters())
            .map(|chi| self.table.row(chi).iter().map(|v| v.approx()).collect())
            .collect()
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.table.prime()
    }
}

#[pyclass(frozen, module = "cayley_spectra_py")]
struct Spectrum {
    spectrum: CoreSpectrum,
}

#[pymethods]
impl Spectrum {
    /// `(character, degree, multiplicity, exact value, approximate value)`
    /// per irreducible character.
    fn entries(&self) -> Vec<(usize, u64, u64, String, Complex64)> {
        self.spectrum
            .entries()
            .iter()
            .map(|e| {
                (
                    e.character,
                    e.degree,
                    e.multiplicity,
                    e.value.to_string(),
                    e.value.approx(),
                )
            })
            .collect()
    }

    /// Every eigenvalue repeated by multiplicity.
    fn eigenvalues(&self) -> Vec<Complex64> {
        self.spectrum.expanded_approx()
    }

    fn is_integral(&self) -> PyResult<bool> {
        all_eigenvalues_integral(&self.spectrum).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.spectrum.total_multiplicity() as usize
    }
}

/// Runs a JSON job document and returns `(exit_code, output)`; malformed
/// jobs give exit code 2 and the error message.
#[pyfunction]
fn run_job(job: &str) -> (i32, String) {
    let parsed = serde_json::from_str::<serde_json::Value>(job)
        .map_err(|e| cayley_spectra::job::JobError::Input {
            field: "input".into(),
            message: e.to_string(),
        })
        .and_then(|v| JobSpec::from_json(&v))
        .and_then(|j| run(&j));
    match parsed {
        Ok(out) => (out.exit_code, out.output),
        Err(e) => (e.exit_code(), e.to_string()),
    }
}

#[pymodule]
fn cayley_spectra_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<CharacterTable>()?;
    m.add_class::<Spectrum>()?;
    m.add_function(wrap_pyfunction!(run_job, m)?)?;
    Ok(())
}
