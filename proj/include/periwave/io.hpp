#pragma once

#include <string>
#include <vector>

#include "periwave/diagnostics.hpp"
#include "periwave/problem.hpp"
#include "periwave/resonance.hpp"
#include "periwave/solver.hpp"

namespace periwave::io {

// All numeric output uses 17 significant digits so doubles round-trip and
// identical runs produce byte-identical files.
std::string fmt17(double v);

// Minimal ordered JSON emitter (objects keep insertion order).
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null();

  std::string str() const { return out_; }

private:
  void comma();
  std::string out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

std::string to_json(const ValidationReport& rep);
std::string to_json(const ResonanceReport& rep);
std::string to_json(const SolveResult& res, const double* manufactured_sup_err = nullptr);
std::string to_json(const KernelDimension& kd);
std::string to_json(const SweepResult& sw);

// CSV with header "x,t,w,u1,u2", x outer loop, t inner.
void write_solution_csv(const std::string& path, const SolveResult& res);

// CSV with header "eps,sup_err,deriv_est".
void write_sweep_csv(const std::string& path, const SweepResult& sw);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace periwave::io
