#include "periwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace periwave::io {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void JsonWriter::comma() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  comma();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  comma();
  out_ += '"';
  out_ += escape(k);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma();
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  comma();
  out_ += '"';
  out_ += escape(v);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  comma();
  out_ += "null";
  return *this;
}

std::string to_json(const ValidationReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("pass").value(rep.pass);
  w.key("min_a").value(rep.min_a);
  w.key("C").value(rep.C);
  w.key("C_tolerance").value(rep.C_tolerance);
  w.key("k").value(rep.k);
  w.key("periodicity_defect").begin_object();
  for (const auto& [name, defect] : rep.periodicity_defect) w.key(name).value(defect);
  w.end_object();
  w.key("violations").begin_array();
  for (const auto& v : rep.violations) w.value(v);
  w.end_array();
  w.key("sampling_caveat").value(rep.sampling_caveat);
  w.end_object();
  return w.str();
}

std::string to_json(const ResonanceReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("small").begin_object();
  w.key("pass").value(rep.small_pass);
  w.key("min_abs_integral").value(rep.small_min_abs);
  w.key("margin").value(rep.margin_small);
  w.end_object();
  w.key("small_plus").begin_object();
  w.key("pass").value(rep.small_plus_pass);
  w.key("min_abs_integral").value(rep.small_plus_min_abs);
  w.end_object();
  w.key("q").begin_array();
  for (double q : rep.q) w.value(q);
  w.end_array();
  w.key("q_prime").begin_array();
  for (double q : rep.qp) w.value(q);
  w.end_array();
  w.key("small1").value(rep.small1);
  w.key("small11").value(rep.small11);
  w.key("small111").value(rep.small111);
  w.key("small1111").value(rep.small1111);
  w.key("margin_small1").value(rep.margin_small1);
  w.key("margin_small11").value(rep.margin_small11);
  w.key("margin_small111").value(rep.margin_small111);
  w.key("margin_small1111").value(rep.margin_small1111);
  w.key("near_resonance_warning").value(rep.near_resonance_warning);
  if (rep.stationary_value)
    w.key("stationary_value").value(*rep.stationary_value);
  else
    w.key("stationary_value").null();
  w.key("t_samples").begin_array();
  for (double t : rep.t_samples) w.value(t);
  w.end_array();
  w.key("small_integral").begin_array();
  for (double v : rep.small_integral) w.value(v);
  w.end_array();
  w.key("small_plus_integral").begin_array();
  for (double v : rep.small_plus_integral) w.value(v);
  w.end_array();
  w.key("sampling_caveat").value(rep.sampling_caveat);
  w.end_object();
  return w.str();
}

std::string to_json(const SolveResult& res, const double* manufactured_sup_err) {
  JsonWriter w;
  w.begin_object();
  w.key("converged").value(res.converged);
  w.key("strategy_used").value(res.strategy_used);
  w.key("iterations").value(res.iterations);
  w.key("final_update").value(res.final_update);
  w.key("rep_residual").value(res.rep_residual);
  w.key("q0_used").value(res.q0_used);
  w.key("trace_direction").value(res.trace_stats.direction);
  w.key("trace_iterations").value(res.trace_stats.iterations);
  w.key("trace_contraction").value(res.trace_stats.contraction_estimate);
  if (manufactured_sup_err)
    w.key("sup_error_vs_manufactured").value(*manufactured_sup_err);
  w.key("warnings").begin_array();
  for (const auto& s : res.warnings) w.value(s);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string to_json(const KernelDimension& kd) {
  JsonWriter w;
  w.begin_object();
  w.key("dimension").value(kd.dimension);
  w.key("sigma_max").value(kd.sigma_max);
  w.key("smallest_singular_values").begin_array();
  for (double s : kd.tail) w.value(s);
  w.end_array();
  w.end_object();
  return w.str();
}

std::string to_json(const SweepResult& sw) {
  JsonWriter w;
  w.begin_object();
  w.key("max_pairwise_diff").value(sw.max_pairwise_diff);
  w.key("rows").begin_array();
  for (const auto& r : sw.rows) {
    w.begin_object();
    w.key("eps").value(r.eps);
    w.key("sup_err").value(r.sup_err);
    w.key("deriv_est").value(r.deriv_est);
    w.key("deriv_est_dt").value(r.deriv_est_dt);
    w.end_object();
  }
  w.end_array();
  w.key("richardson").begin_array();
  for (const auto& r : sw.richardson) {
    w.begin_object();
    w.key("eps_center").value(r.eps_center);
    w.key("est_coarse").value(r.est_coarse);
    w.key("est_fine").value(r.est_fine);
    w.key("agreement").value(r.agreement);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

void write_solution_csv(const std::string& path, const SolveResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "x,t,w,u1,u2\n";
  const GridFunction& w = res.w;
  for (int i = 0; i < w.nx(); ++i)
    for (int n = 0; n < w.nt(); ++n)
      out << fmt17(w.x(i)) << ',' << fmt17(w.t(n)) << ',' << fmt17(w(i, n)) << ','
          << fmt17(res.u.u1(i, n)) << ',' << fmt17(res.u.u2(i, n)) << '\n';
}

void write_sweep_csv(const std::string& path, const SweepResult& sw) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "eps,sup_err,deriv_est\n";
  for (const auto& r : sw.rows)
    out << fmt17(r.eps) << ',' << fmt17(r.sup_err) << ',' << fmt17(r.deriv_est)
        << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
}

}  // namespace periwave::io
