#pragma once

// Internal contract between the experiment driver (experiment.cpp) and the
// experiment bodies (experiments.cpp).

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "chslab/config.hpp"
#include "chslab/experiment.hpp"

namespace chslab::experiment {

using Json = nlohmann::ordered_json;

struct WriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All numeric text output funnels through these so reruns are byte-identical.
std::string g17(double x);

class CsvFile {
 public:
  CsvFile() = default;
  CsvFile(const std::filesystem::path& path, const std::string& header);
  ~CsvFile();

  CsvFile(CsvFile&&) = default;
  CsvFile& operator=(CsvFile&&) = default;

  CsvFile& field(double v);
  CsvFile& field(std::int64_t v);
  CsvFile& field(const std::string& v);
  CsvFile& blank();
  void endrow();
  void close();  // flushes and verifies the stream; endrow/close throw on I/O failure

 private:
  std::ofstream out_;
  bool row_started_ = false;
  std::string path_;
};

// Collects the measured-vs-bound assertions that decide the exit status;
// every entry lands in report.json under "checks".
class CheckSet {
 public:
  void require_le(const std::string& name, double measured, double bound);
  void require_ge(const std::string& name, double measured, double bound);
  void require_in(const std::string& name, double measured, double lo,
                  double hi);
  void require_true(const std::string& name, bool ok);

  bool all_passed() const { return pass_; }
  const Json& entries() const { return entries_; }

 private:
  void push(Json entry, bool ok);
  Json entries_ = Json::array();
  bool pass_ = true;
};

struct RunIo {
  std::filesystem::path dir;
  Json report;
  CheckSet checks;

  CsvFile open_results(const std::string& header) const {
    return CsvFile(dir / "results.csv", header);
  }
};

using RunFn = void (*)(const config::ConfigMap&, std::uint64_t seed,
                       int workers, RunIo&);

struct Descriptor {
  const char* name;
  const char* help;     // one paragraph incl. the results.csv schema
  config::ConfigMap (*defaults)();
  RunFn fn;
};

const std::vector<Descriptor>& descriptors();

}  // namespace chslab::experiment
