#include "maxcurves/report.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "maxcurves/repro.hpp"

#ifndef MAXCURVES_SOURCE_DIR
#define MAXCURVES_SOURCE_DIR "."
#endif

using namespace maxcurves;
using report::json;

static json count_envelope(unsigned workers) {
  auto spec = curves::make_cyclic_cover(curves::Family::suzuki, 8, 5);
  count::CountOptions o;
  o.workers = workers;
  auto rep = count::count_points(spec, 4, o);
  report::EnvelopeOptions eo;
  eo.workers = rep.workers_used;
  return report::envelope("count", spec, report::moduli_json(rep.moduli), report::count_result_json(rep),
                          curves::genus_audit_flags(spec), eo);
}

TEST(Report, ByteIdenticalAcrossRerunsAtFixedWorkers) {
  EXPECT_EQ(count_envelope(1).dump(), count_envelope(1).dump());
  EXPECT_EQ(count_envelope(2).dump(), count_envelope(2).dump());
}

TEST(Report, ResultPayloadInvariantUnderWorkerCount) {
  json a = count_envelope(1);
  json b = count_envelope(2);
  json c = count_envelope(8);
  EXPECT_EQ(a["result"], b["result"]);
  EXPECT_EQ(b["result"], c["result"]);
  EXPECT_EQ(a["moduli"], c["moduli"]);
  EXPECT_EQ(a["spec"], c["spec"]);
}

TEST(Report, TimingIsOptIn) {
  json a = count_envelope(1);
  EXPECT_FALSE(a.contains("wall_ms"));
  report::EnvelopeOptions eo;
  eo.workers = 1;
  eo.timing = true;
  eo.wall_ms = 12.5;
  json b = report::envelope("genus", std::nullopt, json::array(), json::object(), {}, eo);
  EXPECT_TRUE(b.contains("wall_ms"));
}

TEST(Report, ValidatesAgainstBundledSchema) {
  std::ifstream in(std::string(MAXCURVES_SOURCE_DIR) + "/schema/report.schema.json");
  ASSERT_TRUE(in.good());
  json schema = json::parse(in);
  std::string err;
  EXPECT_TRUE(report::validate(count_envelope(1), schema, &err)) << err;
  // spec-less envelope with an array-valued result (the repro shape)
  report::EnvelopeOptions eo;
  eo.workers = 1;
  json arr = report::envelope("repro", std::nullopt, json::array(), json::array(), {}, eo);
  EXPECT_TRUE(report::validate(arr, schema, &err)) << err;
  // negative controls: missing required key / wrong type
  json broken = count_envelope(1);
  broken.erase("command");
  EXPECT_FALSE(report::validate(broken, schema, &err));
  json wrong = count_envelope(1);
  wrong["workers"] = "two";
  EXPECT_FALSE(report::validate(wrong, schema, &err));
}

TEST(Report, WorkerEnvironmentVariableIsDefault) {
  setenv("MAXCURVES_WORKERS", "3", 1);
  EXPECT_EQ(count::resolve_workers(0), 3u);
  EXPECT_EQ(count::resolve_workers(5), 5u);  // explicit wins
  unsetenv("MAXCURVES_WORKERS");
}

TEST(Report, SpecJsonNamesFamilies) {
  auto gk = curves::make_cyclic_cover(curves::Family::hermitian, 4, 3);
  json j = report::spec_json(gk);
  EXPECT_EQ(j["family"], "cyclic-cover-hermitian(3)");
  EXPECT_EQ(j["m"], 3);
  EXPECT_EQ(j["d"], 3);
  auto kl = curves::make_kummer_line(4, 9, 3);
  EXPECT_EQ(report::spec_json(kl)["family"], "kummer-line(9)");
}
