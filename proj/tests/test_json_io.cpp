#include <gtest/gtest.h>

#include "hsr/json_io.hpp"

using namespace hsr;

namespace {

const std::string data_dir = HSR_TEST_DATA;

}  // namespace

TEST(ModelJson, BundledModelsRoundTrip)
{
  for (const auto & name : model_names()) {
    const auto spec = load_model(name);
    const Json j    = model_to_json(spec);
    const auto back = model_from_json(Json::parse(j.dump()));
    const auto & a  = spec.structure;
    const auto & b  = back.structure;
    EXPECT_EQ(back.name, name);
    EXPECT_EQ(a.algebra().constants().size(), b.algebra().constants().size()) << name;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      for (std::size_t k = 0; k < a.dim(); ++k) {
        for (std::size_t l = 0; l < a.dim(); ++l) { EXPECT_EQ(a.algebra().constant(i, k, l), b.algebra().constant(i, k, l)); }
      }
    }
    EXPECT_EQ(a.isotropy(), b.isotropy());
    EXPECT_EQ(a.complement(), b.complement());
    EXPECT_EQ(a.distribution().basis(), b.distribution().basis());
    EXPECT_EQ(a.metric(), b.metric());
    EXPECT_EQ(a.grading().size(), b.grading().size());
    EXPECT_EQ(a.representation().size(), b.representation().size());
    ASSERT_EQ(spec.casimirs.size(), back.casimirs.size());
    for (std::size_t i = 0; i < spec.casimirs.size(); ++i) { EXPECT_EQ(spec.casimirs[i], back.casimirs[i]); }
    EXPECT_EQ(spec.kappa, back.kappa);
    EXPECT_EQ(spec.isotropy_connected, back.isotropy_connected);
    EXPECT_EQ(model_to_json(back).dump(), j.dump());
  }
}

TEST(ModelJson, PlainFileLoadsAndValidates)
{
  const auto spec = resolve_model(data_dir + "/heisenberg_plain.json");
  EXPECT_EQ(spec.name, "heisenberg_plain");
  EXPECT_TRUE(spec.structure.isotropy().is_zero());
  EXPECT_TRUE(validate_structure(spec.structure).valid());
  EXPECT_EQ(spec.fact("go_status"), std::optional<std::string>("GO_affirmed_up_to_degree"));
  EXPECT_TRUE(model_casimir_ok(spec, spec.casimirs[0]));
}

TEST(ModelJson, BrokenJacobiLoadsButFailsValidation)
{
  const auto spec = resolve_model(data_dir + "/broken_jacobi.json");
  const auto rep  = validate_structure(spec.structure);
  EXPECT_FALSE(rep.algebra.valid());
  EXPECT_FALSE(rep.algebra.violations.empty());
}

TEST(ModelJson, FormatErrors)
{
  EXPECT_THROW(resolve_model(data_dir + "/malformed.json"), SpecFormatError);
  EXPECT_THROW(resolve_model(data_dir + "/missing.json"), SpecFormatError);
  EXPECT_THROW(resolve_model("nosuch"), ModelError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"dim": 2})")), SpecFormatError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"dim": 2, "constants": [[1, 3, 1, 1, 1]], "m_basis": [[1,0],[0,1]],
    "delta_basis": [[1,0]], "metric": [[1]]})")),
    SpecFormatError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"dim": 2, "constants": [], "m_basis": [[1,0],[0,1]],
    "delta_basis": [[1,0]], "metric": [[-1]]})")),
    StructureError);
}

TEST(RecordJson, CertificateFields)
{
  const auto c = check_homogeneous(make_heisenberg().structure, Eigen::Vector4d(1, 0, 2, 0));
  const Json j = certificate_json(c);
  EXPECT_EQ(j["verdict"], "homogeneous");
  EXPECT_EQ(j["witness"].size(), 4u);
  EXPECT_EQ(j["threshold"], 1e-8);
  const Json bad = certificate_json(check_homogeneous(make_cartan().structure, (Eigen::VectorXd(6) << 1, 0, 0, 1, 0, 0).finished()));
  EXPECT_EQ(bad["verdict"], "not_homogeneous");
  EXPECT_TRUE(bad["witness"].is_null());
}

TEST(RecordJson, ExistenceCarriesAudit)
{
  const auto & s = load_model("so3_kp").structure;
  const Json j   = existence_json(s, construct_homogeneous_geodesic(s));
  EXPECT_EQ(j["route"], "factorized");
  EXPECT_EQ(j["audit"]["factored_ideals"].size(), 1u);
  EXPECT_TRUE(j["audit"]["eigen"]["verified"].get<bool>());
}
