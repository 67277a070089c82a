#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dnlab/bessel.hpp"
#include "dnlab/calderon.hpp"
#include "dnlab/disk.hpp"
#include "dnlab/dn.hpp"
#include "dnlab/forms.hpp"
#include "dnlab/linalg.hpp"
#include "dnlab/perturbation.hpp"
#include "dnlab/simulate.hpp"
#include "dnlab/spectral.hpp"

namespace py = pybind11;
using namespace dnlab;

PYBIND11_MODULE(_dnlab, m) {
  m.doc() = "DN operators of finite Dirichlet forms: Schur-complement "
            "boundary operators, signed perturbations, h-transforms, "
            "unit-disk closed forms, and Monte Carlo counterparts";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  static py::exception<NumericError> numeric_error(m, "NumericError");
  py::register_exception<SingularInterior>(m, "SingularInterior",
                                           numeric_error.ptr());
  py::register_exception<NotMarkovian>(m, "NotMarkovian", numeric_error.ptr());
  py::register_exception<NotGaugeable>(m, "NotGaugeable", numeric_error.ptr());
  py::register_exception<NonPositiveH>(m, "NonPositiveH", numeric_error.ptr());
  py::register_exception<NotExcessive>(m, "NotExcessive", numeric_error.ptr());
  py::register_exception<NonDiagonalDifference>(m, "NonDiagonalDifference",
                                                numeric_error.ptr());

  py::class_<FormSpec>(m, "FormSpec")
      .def(py::init<std::vector<std::string>, const EdgeList&,
                    const ScalarMap&, const ScalarMap&,
                    const std::vector<std::string>&, const ScalarMap&>(),
           py::arg("vertices"), py::arg("edges"), py::arg("kill"),
           py::arg("m"), py::arg("boundary"), py::arg("mu"))
      .def_static("from_json", &FormSpec::from_json)
      .def_static("from_json_file", &FormSpec::from_json_file)
      .def_property_readonly("vertices", &FormSpec::vertices)
      .def_property_readonly("boundary_ids", &FormSpec::boundary_ids)
      .def_property_readonly("size", &FormSpec::size)
      .def_property_readonly("n_boundary", &FormSpec::n_boundary)
      .def_property_readonly("n_interior", &FormSpec::n_interior)
      .def_property_readonly("energy_matrix", &FormSpec::energy_matrix)
      .def_property_readonly("measure", &FormSpec::measure)
      .def_property_readonly("kill_weights", &FormSpec::kill_weights)
      .def_property_readonly("boundary_measure", &FormSpec::boundary_measure)
      .def("index_of", &FormSpec::index_of);

  m.def("energy", &energy, py::arg("form"), py::arg("u"), py::arg("v"));
  m.def("harmonic_extension", &harmonic_extension, py::arg("form"),
        py::arg("phi"));
  m.def(
      "decompose",
      [](const FormSpec& form, const Vector& u) {
        const Decomposition d = decompose(form, u);
        return py::make_tuple(d.harmonic_part, d.interior_part);
      },
      py::arg("form"), py::arg("u"),
      "Split u into (harmonic_part, interior_part)");
  m.def("is_markovian", &is_markovian, py::arg("form_matrix"),
        py::arg("rtol") = 1e-10);
  m.def("is_irreducible", &is_irreducible, py::arg("form"));

  py::class_<DnOperator>(m, "DnOperator")
      .def_readonly("boundary_ids", &DnOperator::boundary_ids)
      .def_readonly("S", &DnOperator::S)
      .def_readonly("N", &DnOperator::N)
      .def_readonly("mu", &DnOperator::mu);
  m.def("dn_operator", &dn_operator, py::arg("form"));
  m.def(
      "beurling_deny",
      [](const DnOperator& dn, double rtol) {
        const BeurlingDenyData bd = beurling_deny(dn, rtol);
        return py::make_tuple(bd.jump_kernel, bd.killing_vector);
      },
      py::arg("dn"), py::arg("rtol") = 1e-10,
      "Jump kernel and killing vector of a Markovian trace matrix");

  py::class_<SignedPotential>(m, "SignedPotential")
      .def(py::init<Vector, Vector>(), py::arg("plus"), py::arg("minus"))
      .def_static("zero", &SignedPotential::zero)
      .def_static("from_signed", &SignedPotential::from_signed)
      .def_static("from_json", &SignedPotential::from_json)
      .def_static("from_json_file", &SignedPotential::from_json_file)
      .def_property_readonly("plus", &SignedPotential::plus)
      .def_property_readonly("minus", &SignedPotential::minus)
      .def("signed_vector", &SignedPotential::signed_vector)
      .def("boundary_supported", &SignedPotential::boundary_supported,
           py::arg("form"), py::arg("tol") = 0.0);

  m.def("perturbed_form", &perturbed_form, py::arg("form"), py::arg("kappa"));
  m.def("perturbed_dn", &perturbed_dn, py::arg("form"), py::arg("kappa"));
  m.def("kappa_harmonic_extension", &kappa_harmonic_extension,
        py::arg("form"), py::arg("kappa"), py::arg("phi"));
  m.def("interior_positivity", &interior_positivity, py::arg("form"),
        py::arg("kappa"), py::arg("rtol") = 1e-12);
  m.def("trace_positivity_preserving", &trace_positivity_preserving,
        py::arg("form"), py::arg("kappa"), py::arg("rtol") = 1e-10);

  py::class_<DecompositionThreshold>(m, "DecompositionThreshold")
      .def_readonly("passes", &DecompositionThreshold::passes)
      .def_readonly("min_abs_eigenvalue",
                    &DecompositionThreshold::min_abs_eigenvalue)
      .def_readonly("spectral_radius", &DecompositionThreshold::spectral_radius)
      .def_readonly("margin", &DecompositionThreshold::margin)
      .def_readonly("near_threshold", &DecompositionThreshold::near_threshold);
  m.def("decomposition_threshold", &decomposition_threshold, py::arg("form"),
        py::arg("kappa"));

  py::class_<BoundCertificate>(m, "BoundCertificate")
      .def_readonly("delta", &BoundCertificate::delta)
      .def_readonly("c_delta", &BoundCertificate::c_delta)
      .def_readonly("c_reference", &BoundCertificate::c_reference)
      .def_readonly("restricted_to_trace",
                    &BoundCertificate::restricted_to_trace)
      .def_readonly("grid", &BoundCertificate::grid);
  m.def("default_c_grid", &default_c_grid);
  m.def("form_bound", &form_bound, py::arg("form"), py::arg("kappa"),
        py::arg("c_grid") = default_c_grid());
  m.def("form_bound_on_trace", &form_bound_on_trace, py::arg("form"),
        py::arg("kappa"), py::arg("c_grid") = default_c_grid());

  py::class_<PerturbedTraceReport>(m, "PerturbedTraceReport")
      .def_readonly("perturbation_matrix",
                    &PerturbedTraceReport::perturbation_matrix)
      .def_readonly("killing_change", &PerturbedTraceReport::killing_change)
      .def_readonly("resolvent_residual",
                    &PerturbedTraceReport::resolvent_residual)
      .def_readonly("split_residual", &PerturbedTraceReport::split_residual)
      .def_readonly("symmetry_residual",
                    &PerturbedTraceReport::symmetry_residual)
      .def_readonly("rearrangement_residual",
                    &PerturbedTraceReport::rearrangement_residual)
      .def_readonly("pass_", &PerturbedTraceReport::pass);
  m.def("verify_perturbed_trace_identity", &verify_perturbed_trace_identity,
        py::arg("form"), py::arg("kappa"), py::arg("rtol") = 1e-10);

  py::class_<BoundaryRecovery>(m, "BoundaryRecovery")
      .def_readonly("kappa_on_boundary", &BoundaryRecovery::kappa_on_boundary)
      .def_readonly("offdiagonal_residual",
                    &BoundaryRecovery::offdiagonal_residual);
  m.def("calderon_boundary_recover", &calderon_boundary_recover,
        py::arg("dn_perturbed"), py::arg("dn_base"), py::arg("rtol") = 1e-10);

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_readonly("eigenvalues", &SpectralResult::eigenvalues)
      .def_readonly("eigenvectors", &SpectralResult::eigenvectors)
      .def_readonly("ground_state", &SpectralResult::ground_state)
      .def_property_readonly("simple", [](const SpectralResult& r) {
        return r.simple.has_value() ? py::cast(r.simple.value())
                                    : py::none().cast<py::object>();
      });
  m.def("spectrum", &spectrum, py::arg("dn"));

  py::enum_<ExcessiveCheck>(m, "ExcessiveCheck")
      .value("generator", ExcessiveCheck::generator)
      .value("grid_certified", ExcessiveCheck::grid_certified);
  py::class_<ExcessiveResult>(m, "ExcessiveResult")
      .def_readonly("excessive", &ExcessiveResult::excessive)
      .def_readonly("method", &ExcessiveResult::method);
  m.def("is_alpha_excessive", &is_alpha_excessive, py::arg("dn"),
        py::arg("phi"), py::arg("alpha"), py::arg("rtol") = 1e-10);

  py::class_<HTransform>(m, "HTransform")
      .def_readonly("h", &HTransform::h)
      .def_readonly("alpha", &HTransform::alpha)
      .def_readonly("transformed_generator", &HTransform::transformed_generator)
      .def_readonly("transformed_measure", &HTransform::transformed_measure);
  m.def("h_transform", &h_transform, py::arg("dn"), py::arg("h"),
        py::arg("alpha"));

  py::class_<TrichotomyResult>(m, "TrichotomyResult")
      .def_readonly("irreducible", &TrichotomyResult::irreducible)
      .def_readonly("nonnegative", &TrichotomyResult::nonnegative)
      .def_readonly("recurrent", &TrichotomyResult::recurrent)
      .def_readonly("ground_state_characterization",
                    &TrichotomyResult::ground_state_characterization)
      .def_readonly("consistent", &TrichotomyResult::consistent);
  m.def("trichotomy", &trichotomy, py::arg("dn"), py::arg("h"),
        py::arg("alpha"));
  m.def("expm", &expm, py::arg("m"));
  m.def("trace_semigroup", &trace_semigroup, py::arg("dn"), py::arg("t"));

  py::class_<DiskModel>(m, "DiskModel")
      .def(py::init([](double lambda, int bessel_order_max, int quad_radial,
                       int quad_angular) {
             return DiskModel{lambda, bessel_order_max, quad_radial,
                              quad_angular};
           }),
           py::arg("lambda_") = 0.0, py::arg("bessel_order_max") = 16,
           py::arg("quad_radial") = 256, py::arg("quad_angular") = 256)
      .def_readwrite("lambda_", &DiskModel::lambda)
      .def_readwrite("bessel_order_max", &DiskModel::bessel_order_max)
      .def_readwrite("quad_radial", &DiskModel::quad_radial)
      .def_readwrite("quad_angular", &DiskModel::quad_angular);
  m.def("first_dirichlet_eigenvalue", &first_dirichlet_eigenvalue);
  m.def("gauge_threshold", &gauge_threshold);
  m.def("dn_eigenvalue", &dn_eigenvalue, py::arg("model"), py::arg("n"));
  m.def("douglas_energy", &douglas_energy, py::arg("phi_samples"));
  m.def("poisson_kernel", &poisson_kernel, py::arg("x"), py::arg("xi_angle"));
  m.def("gauge",
        [](const DiskModel& model, std::array<double, 2> x) {
          return gauge(model, x);
        },
        py::arg("model"), py::arg("x"));
  m.def("gauge_radial", &gauge_radial, py::arg("model"), py::arg("r"));
  m.def("v_lambda", &v_lambda, py::arg("model"));
  m.def("bessel_i", &bessel_i, py::arg("n"), py::arg("x"));
  m.def("bessel_j", &bessel_j, py::arg("n"), py::arg("x"));
  m.def("bessel_j0_zero", &bessel_j0_zero, py::arg("k"));

  py::class_<ChainPath>(m, "ChainPath")
      .def_readonly("states", &ChainPath::states)
      .def_readonly("holding_times", &ChainPath::holding_times)
      .def_readonly("feynman_kac_weight", &ChainPath::feynman_kac_weight);
  m.def("simulate_chain", &simulate_chain, py::arg("form"), py::arg("kappa"),
        py::arg("start"), py::arg("horizon"), py::arg("seed"),
        py::arg("path_index") = 0);

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("value", &McEstimate::value)
      .def_readonly("stderr", &McEstimate::stderr_)
      .def_readonly("samples", &McEstimate::samples)
      .def_readonly("seed", &McEstimate::seed);

  py::class_<TracedGeneratorEstimate>(m, "TracedGeneratorEstimate")
      .def_readonly("generator", &TracedGeneratorEstimate::generator)
      .def_readonly("stderr", &TracedGeneratorEstimate::stderr_)
      .def_readonly("samples_per_vertex",
                    &TracedGeneratorEstimate::samples_per_vertex)
      .def_readonly("seed", &TracedGeneratorEstimate::seed);
  m.def("traced_boundary_generator", &traced_boundary_generator,
        py::arg("form"), py::arg("samples"), py::arg("seed"),
        py::arg("workers") = 1);

  py::class_<TraceCheckReport>(m, "TraceCheckReport")
      .def_readonly("estimate", &TraceCheckReport::estimate)
      .def_readonly("max_abs_deviation", &TraceCheckReport::max_abs_deviation)
      .def_readonly("max_sigma", &TraceCheckReport::max_sigma)
      .def_readonly("pass_", &TraceCheckReport::pass);
  m.def("verify_trace_generator", &verify_trace_generator, py::arg("form"),
        py::arg("dn"), py::arg("samples"), py::arg("seed"),
        py::arg("workers") = 1);

  py::class_<WosEstimate>(m, "WosEstimate")
      .def_readonly("estimate", &WosEstimate::estimate)
      .def_readonly("discarded", &WosEstimate::discarded)
      .def_readonly("discarded_fraction", &WosEstimate::discarded_fraction);
  m.def("wos_harmonic_extension", &wos_harmonic_extension, py::arg("model"),
        py::arg("phi"), py::arg("x"), py::arg("samples"), py::arg("seed"),
        py::arg("workers") = 1);

  py::class_<FkMatrixEstimate>(m, "FkMatrixEstimate")
      .def_readonly("transition", &FkMatrixEstimate::transition)
      .def_readonly("stderr", &FkMatrixEstimate::stderr_);
  m.def("fk_transition_estimate", &fk_transition_estimate, py::arg("form"),
        py::arg("kappa"), py::arg("t"), py::arg("samples"), py::arg("seed"),
        py::arg("workers") = 1);

  py::class_<InverseProblem>(m, "InverseProblem")
      .def(py::init<FormSpec, Matrix, std::vector<int>, double>(),
           py::arg("base"), py::arg("observed_S"), py::arg("unknown_support"),
           py::arg("regularization") = 0.0);
  py::class_<RecoveryResult>(m, "RecoveryResult")
      .def_readonly("potential_estimate", &RecoveryResult::potential_estimate)
      .def_readonly("residual_norm", &RecoveryResult::residual_norm)
      .def_readonly("gradient_norm", &RecoveryResult::gradient_norm)
      .def_readonly("iterations", &RecoveryResult::iterations)
      .def_readonly("converged", &RecoveryResult::converged)
      .def_readonly("jacobian_rank", &RecoveryResult::jacobian_rank);
  m.def("forward_map", &forward_map, py::arg("base"), py::arg("v_interior"));
  m.def("dn_jacobian", &dn_jacobian, py::arg("base"), py::arg("v_interior"),
        py::arg("support"));
  m.def("integral_identity_residual", &integral_identity_residual,
        py::arg("base"), py::arg("v1"), py::arg("v2"), py::arg("phi"));
  m.def("recover_interior", &recover_interior, py::arg("problem"),
        py::arg("init"), py::arg("max_iter") = 100, py::arg("tol") = 1e-12);

  m.attr("__version__") = "0.1.0";
}
