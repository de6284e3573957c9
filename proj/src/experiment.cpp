#include "chslab/experiment.hpp"

#include <cstdio>
#include <iostream>
#include <utility>
#include <variant>

#include "chslab/integrator.hpp"
#include "chslab/version.hpp"
#include "experiments.hpp"

namespace chslab::experiment {

namespace fs = std::filesystem;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvFile::CsvFile(const fs::path& path, const std::string& header)
    : out_(path), path_(path.string()) {
  if (!out_) throw WriteError("cannot open '" + path_ + "' for writing");
  out_ << header << '\n';
}

CsvFile::~CsvFile() {
  if (out_.is_open()) out_.flush();
}

CsvFile& CsvFile::field(double v) {
  if (row_started_) out_ << ',';
  out_ << g17(v);
  row_started_ = true;
  return *this;
}

CsvFile& CsvFile::field(std::int64_t v) {
  if (row_started_) out_ << ',';
  out_ << v;
  row_started_ = true;
  return *this;
}

CsvFile& CsvFile::field(const std::string& v) {
  if (row_started_) out_ << ',';
  out_ << v;
  row_started_ = true;
  return *this;
}

CsvFile& CsvFile::blank() {
  if (row_started_) out_ << ',';
  row_started_ = true;
  return *this;
}

void CsvFile::endrow() {
  out_ << '\n';
  row_started_ = false;
  if (!out_) throw WriteError("write to '" + path_ + "' failed");
}

void CsvFile::close() {
  out_.flush();
  if (!out_) throw WriteError("write to '" + path_ + "' failed");
  out_.close();
}

void CheckSet::push(Json entry, bool ok) {
  entry["pass"] = ok;
  entries_.push_back(std::move(entry));
  pass_ = pass_ && ok;
}

void CheckSet::require_le(const std::string& name, double measured,
                          double bound) {
  push({{"name", name}, {"kind", "le"}, {"measured", measured},
        {"bound", bound}},
       measured <= bound);
}

void CheckSet::require_ge(const std::string& name, double measured,
                          double bound) {
  push({{"name", name}, {"kind", "ge"}, {"measured", measured},
        {"bound", bound}},
       measured >= bound);
}

void CheckSet::require_in(const std::string& name, double measured, double lo,
                          double hi) {
  push({{"name", name}, {"kind", "range"}, {"measured", measured}, {"lo", lo},
        {"hi", hi}},
       measured >= lo && measured <= hi);
}

void CheckSet::require_true(const std::string& name, bool ok) {
  push({{"name", name}, {"kind", "flag"}}, ok);
}

namespace {

const Descriptor* find_descriptor(const std::string& name) {
  for (const Descriptor& d : descriptors())
    if (name == d.name) return &d;
  return nullptr;
}

Json config_to_json(const config::ConfigMap& map) {
  Json j = Json::object();
  for (const auto& [key, value] : map)
    std::visit([&, k = key](const auto& v) { j[k] = v; }, value);
  return j;
}

bool write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const Descriptor& d : descriptors()) names.emplace_back(d.name);
  return names;
}

std::string experiment_help() {
  std::string text;
  for (const Descriptor& d : descriptors()) {
    text += d.name;
    text += "\n";
    text += d.help;
    text += "\n\n";
  }
  return text;
}

int run(const ExperimentSpec& spec) {
  const Descriptor* d = find_descriptor(spec.name);
  if (!d) {
    std::cerr << "unknown experiment '" << spec.name << "'; available:";
    for (const auto& n : experiment_names()) std::cerr << ' ' << n;
    std::cerr << '\n';
    return kExitUsage;
  }

  config::ConfigMap resolved = d->defaults();
  std::vector<std::string_view> allowed;
  allowed.reserve(resolved.size());
  for (const auto& [key, value] : resolved) allowed.emplace_back(key);
  try {
    config::require_known(spec.values, allowed);
  } catch (const config::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  for (const auto& [key, value] : spec.values) resolved[key] = value;

  // Manifest first: it records what is about to run, and its failure is the
  // unwritable-directory signal.
  Json manifest;
  manifest["experiment"] = spec.name;
  manifest["version"] = kVersion;
  manifest["seed"] = spec.seed;
  manifest["config"] = config_to_json(resolved);

  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  RunIo io{fs::path(spec.out_dir), Json::object(), CheckSet{}};
  if (!write_text(io.dir / "manifest.json", manifest.dump(2) + "\n")) {
    std::cerr << "cannot write into output directory '" << spec.out_dir
              << "'\n";
    return kExitCantWrite;
  }

  int code = kExitOk;
  try {
    d->fn(resolved, spec.seed, spec.workers, io);
  } catch (const dynamics::BlowUpError& e) {
    io.report["blow_up"] = {{"step", e.step},
                            {"t", e.t},
                            {"h_minus1", e.h_minus1}};
    code = kExitBlowUp;
  } catch (const WriteError& e) {
    std::cerr << e.what() << '\n';
    return kExitCantWrite;
  } catch (const config::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    io.report["error"] = e.what();
    code = kExitCheckFailed;
  }

  io.report["checks"] = io.checks.entries();
  io.report["pass"] = code == kExitOk && io.checks.all_passed();
  if (code == kExitOk && !io.checks.all_passed()) code = kExitCheckFailed;

  if (!write_text(io.dir / "report.json", io.report.dump(2) + "\n")) {
    std::cerr << "cannot write report.json\n";
    return kExitCantWrite;
  }
  return code;
}

}  // namespace chslab::experiment
