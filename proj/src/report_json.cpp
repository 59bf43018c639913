#include "curv/report.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "curv/catalog.hpp"
#include "curv/holonomy.hpp"
#include "format.hpp"

namespace curv {

namespace {

using nlohmann::json;

json verdict_json(const ResidualVerdict& rv) {
  return {{"residual", rv.residual},
          {"scale", rv.scale},
          {"verdict", rv.verdict},
          {"available", rv.available}};
}

json holonomy_json(const HolonomyReport& h) {
  json basis = json::array();
  for (const auto& v : h.kernel_basis) basis.push_back(v);
  json chars = json::array();
  for (CausalCharacter c : h.characters) chars.push_back(causal_character_name(c));
  return {{"generator_count", h.generator_count},
          {"algebra_dim", h.algebra_dim},
          {"tangent_kernel_dim", h.tangent_kernel_dim},
          {"kernel_basis", basis},
          {"characters", chars},
          {"kernel_contains_null", h.kernel_contains_null},
          {"sym2_kernel_dim_mod_g", h.sym2_kernel_dim_mod_g}};
}

json point_json(const PointRecord& rec) {
  const PointClassification& cls = rec.cls;
  json verdicts{{"constant_curvature", verdict_json(cls.constant_curvature)},
                {"symmetric", verdict_json(cls.symmetric)},
                {"two_symmetric", verdict_json(cls.two_symmetric)},
                {"semisymmetric", verdict_json(cls.semisymmetric)},
                {"ricci_flat", verdict_json(cls.ricci_flat)}};
  json ksym = json::object();
  for (const auto& [k, rv] : cls.k_symmetric) ksym[std::to_string(k)] = verdict_json(rv);
  verdicts["k_symmetric"] = ksym;

  const ScalarGradientData& gs = cls.grad_scalar;
  json grad{{"values", gs.values},
            {"max_abs", gs.max_abs},
            {"nonzero", gs.nonzero},
            {"null_abs", gs.null_abs},
            {"null_scale", gs.null_scale},
            {"hessian_max", gs.hessian_max},
            {"hessian_scale", gs.hessian_scale},
            {"hessian_available", gs.hessian_available}};

  json op{{"pair_dim", rec.op.pair_dim},
          {"matrix", rec.op.matrix},
          {"sigma_min", rec.op.sigma_min},
          {"sigma_max", rec.op.sigma_max},
          {"generic", rec.op.generic}};

  json out{{"point", cls.point},
           {"verdicts", verdicts},
           {"generic", cls.generic},
           {"sigma_min", cls.sigma_min},
           {"sigma_max", cls.sigma_max},
           {"operator", op},
           {"grad_scalar", grad}};

  if (rec.invariants_available) {
    json entries = json::array();
    for (const InvariantEntry& e : rec.invariants.entries)
      entries.push_back({{"name", e.name},
                         {"rank", e.rank},
                         {"order", e.order},
                         {"values", e.values},
                         {"max_abs", e.max_abs},
                         {"scale", e.scale},
                         {"zero", e.zero}});
    out["invariants"] = entries;
  } else {
    out["invariants"] = nullptr;
  }

  out["holonomy"] = rec.holonomy_available ? holonomy_json(rec.holonomy) : json(nullptr);

  if (rec.identities_ran) {
    json ids = json::array();
    for (const IdentityResult& r : rec.identities)
      ids.push_back({{"id", r.id},
                     {"residual", r.residual},
                     {"scale", r.scale},
                     {"pass", r.pass}});
    out["identities"] = ids;
  } else {
    out["identities"] = nullptr;
  }
  return out;
}

// Aggregated invariant table: worst magnitude per entry across points.
json invariants_summary(const ClassificationReport& report) {
  bool any = false;
  std::vector<std::string> order_names;
  std::map<std::string, json> rows;
  for (const PointRecord& rec : report.points) {
    if (!rec.invariants_available) continue;
    any = true;
    for (const InvariantEntry& e : rec.invariants.entries) {
      auto it = rows.find(e.name);
      if (it == rows.end()) {
        order_names.push_back(e.name);
        rows[e.name] = {{"name", e.name},
                        {"rank", e.rank},
                        {"order", e.order},
                        {"max_abs_over_points", e.max_abs},
                        {"zero_everywhere", e.zero}};
      } else {
        json& row = it->second;
        row["max_abs_over_points"] =
            std::max(row["max_abs_over_points"].get<double>(), e.max_abs);
        row["zero_everywhere"] = row["zero_everywhere"].get<bool>() && e.zero;
      }
    }
  }
  if (!any) return {{"available", false}};
  json entries = json::array();
  for (const std::string& name : order_names) entries.push_back(rows[name]);
  return {{"available", true}, {"entries", entries}};
}

json holonomy_summary(const ClassificationReport& report) {
  const PointRecord* first = nullptr;
  bool uniform = true;
  for (const PointRecord& rec : report.points) {
    if (!rec.holonomy_available) continue;
    if (!first) {
      first = &rec;
    } else {
      const HolonomyReport& a = first->holonomy;
      const HolonomyReport& b = rec.holonomy;
      uniform = uniform && a.tangent_kernel_dim == b.tangent_kernel_dim &&
                a.kernel_contains_null == b.kernel_contains_null &&
                a.algebra_dim == b.algebra_dim &&
                a.sym2_kernel_dim_mod_g == b.sym2_kernel_dim_mod_g &&
                a.characters == b.characters;
    }
  }
  if (!first) return {{"available", false}};
  json out = holonomy_json(first->holonomy);
  out["available"] = true;
  out["uniform"] = uniform;
  return out;
}

// Recursive writer with sorted keys and fixed float formatting; nlohmann's
// default dump would print shortest-round-trip floats instead.
void dump(const json& j, std::string& out, int indent) {
  const std::string pad(size_t(indent) * 2, ' ');
  const std::string pad_in(size_t(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool sep = false;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (sep) out += ",\n";
        sep = true;
        out += pad_in;
        out += json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool sep = false;
      for (const json& item : j) {
        if (sep) out += ",\n";
        sep = true;
        out += pad_in;
        dump(item, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += detail::format_double17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

const char* view_name(ReportView view) {
  switch (view) {
    case ReportView::Classify: return "classify";
    case ReportView::Invariants: return "invariants";
    case ReportView::Identities: return "identities";
    case ReportView::Holonomy: return "holonomy";
  }
  return "classify";
}

}  // namespace

std::string report_json(const ClassificationReport& report, const std::string& command) {
  const SampleConfig& cfg = report.config;
  json skipped = json::array();
  for (const Point& p : report.skipped) skipped.push_back(p);

  const AggregateVerdicts& agg = report.aggregate;
  json ksym = json::object();
  for (const auto& [k, v] : agg.k_symmetric) ksym[std::to_string(k)] = v;
  json aggregate{{"constant_curvature", agg.constant_curvature},
                 {"symmetric", agg.symmetric},
                 {"two_symmetric", agg.two_symmetric},
                 {"two_symmetric_available", agg.two_symmetric_available},
                 {"semisymmetric", agg.semisymmetric},
                 {"ricci_flat", agg.ricci_flat},
                 {"generic", agg.generic},
                 {"k_symmetric", ksym},
                 {"identities_pass", agg.identities_pass},
                 {"identity_points", agg.identity_points},
                 {"points_used", report.points.size()},
                 {"points_skipped", report.skipped.size()},
                 {"skipped_points", skipped}};

  // No worker count here: the report must be byte-identical however the
  // point loop was scheduled.
  json config{{"command", command},
              {"points", cfg.points},
              {"seed", cfg.seed},
              {"order", cfg.order},
              {"k_max", cfg.k_max},
              {"tol_abs", cfg.tol_abs},
              {"tol_rel", cfg.tol_rel},
              {"force_identities", cfg.force_identities}};

  json consistency = json::array();
  for (const ConsistencyFinding& f : report.findings) {
    json row{{"id", f.id},
             {"status", finding_status_name(f.status)},
             {"applicable_points", f.applicable_points},
             {"witness_index", f.witness_index},
             {"detail", f.detail}};
    row["witness"] = f.witness_index >= 0 ? json(f.witness) : json(nullptr);
    consistency.push_back(row);
  }

  json points = json::array();
  for (const PointRecord& rec : report.points) points.push_back(point_json(rec));

  json root{{"spec",
             {{"name", report.spec_name},
              {"dim", report.dim},
              {"coords", report.spec.coords},
              {"text", emit_metric(report.spec)}}},
            {"config", config},
            {"points", points},
            {"aggregate", aggregate},
            {"holonomy", holonomy_summary(report)},
            {"consistency", consistency},
            {"invariants", invariants_summary(report)}};

  std::string out;
  dump(root, out, 0);
  out += "\n";
  return out;
}

bool report_clean(const ClassificationReport& report) {
  for (const ConsistencyFinding& f : report.findings)
    if (f.status == FindingStatus::Fail) return false;
  return report.aggregate.identities_pass;
}

namespace {

std::string fmt(double v) { return detail::format_double(v); }

std::string point_string(const Point& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += fmt(p[i]);
  }
  return out + ")";
}

void text_verdicts(const ClassificationReport& report, std::string& out) {
  const AggregateVerdicts& agg = report.aggregate;
  auto line = [&out](const std::string& name, bool v) {
    out += "verdict " + name + " = " + (v ? "true" : "false") + "\n";
  };
  line("constant_curvature", agg.constant_curvature);
  line("symmetric", agg.symmetric);
  line("two_symmetric", agg.two_symmetric);
  line("semisymmetric", agg.semisymmetric);
  line("ricci_flat", agg.ricci_flat);
  line("generic", agg.generic);
  for (const auto& [k, v] : agg.k_symmetric)
    line("k_symmetric[" + std::to_string(k) + "]", v);
}

void text_identities(const ClassificationReport& report, std::string& out) {
  // Worst residual-to-scale instance per identity across the points where the
  // suite ran.
  std::vector<std::string> order_names;
  std::map<std::string, IdentityResult> worst;
  auto worse = [](const IdentityResult& a, const IdentityResult& b) {
    if (a.pass != b.pass) return !a.pass;
    return a.residual > b.residual;
  };
  int ran = 0;
  for (const PointRecord& rec : report.points) {
    if (!rec.identities_ran) continue;
    ++ran;
    for (const IdentityResult& r : rec.identities) {
      auto it = worst.find(r.id);
      if (it == worst.end()) {
        order_names.push_back(r.id);
        worst[r.id] = r;
      } else if (worse(r, it->second)) {
        it->second = r;
      }
    }
  }
  out += "identity suite points = " + std::to_string(ran) + "\n";
  if (ran == 0) {
    out += "identity suite skipped: input is not two-symmetric "
           "(pass --force to run anyway)\n";
    return;
  }
  for (const std::string& id : order_names) {
    const IdentityResult& r = worst[id];
    out += "identity " + id + " residual " + fmt(r.residual) + " scale " +
           fmt(r.scale) + " " + (r.pass ? "pass" : "fail") + "\n";
  }
}

void text_holonomy(const ClassificationReport& report, std::string& out) {
  const PointRecord* first = nullptr;
  for (const PointRecord& rec : report.points)
    if (rec.holonomy_available) {
      first = &rec;
      break;
    }
  if (!first) {
    out += "holonomy available = false\n";
    return;
  }
  const HolonomyReport& h = first->holonomy;
  out += "holonomy generator count = " + std::to_string(h.generator_count) + "\n";
  out += "holonomy algebra dim = " + std::to_string(h.algebra_dim) + "\n";
  out += "holonomy kernel dim = " + std::to_string(h.tangent_kernel_dim) + "\n";
  out += std::string("holonomy kernel contains null = ") +
         (h.kernel_contains_null ? "true" : "false") + "\n";
  out += "holonomy sym2 kernel dim mod g = " +
         std::to_string(h.sym2_kernel_dim_mod_g) + "\n";
  for (size_t i = 0; i < h.kernel_basis.size(); ++i) {
    out += "parallel candidate " + std::to_string(i) + " (" +
           causal_character_name(h.characters[i]) + "):";
    for (double c : h.kernel_basis[i]) out += " " + fmt(c);
    out += "\n";
  }
}

void text_invariants(const ClassificationReport& report, std::string& out) {
  std::vector<std::string> order_names;
  std::map<std::string, InvariantEntry> worst;
  for (const PointRecord& rec : report.points) {
    if (!rec.invariants_available) continue;
    for (const InvariantEntry& e : rec.invariants.entries) {
      auto it = worst.find(e.name);
      if (it == worst.end()) {
        order_names.push_back(e.name);
        worst[e.name] = e;
      } else {
        it->second.max_abs = std::max(it->second.max_abs, e.max_abs);
        it->second.scale = std::max(it->second.scale, e.scale);
        it->second.zero = it->second.zero && e.zero;
      }
    }
  }
  if (order_names.empty()) {
    out += "invariants available = false\n";
    return;
  }
  for (const std::string& name : order_names) {
    const InvariantEntry& e = worst[name];
    out += "invariant " + name + " max " + fmt(e.max_abs) + " scale " +
           fmt(e.scale) + " zero = " + (e.zero ? "true" : "false") + "\n";
  }
}

void text_consistency(const ClassificationReport& report, std::string& out) {
  for (const ConsistencyFinding& f : report.findings) {
    out += "consistency " + f.id + " = " + finding_status_name(f.status);
    if (f.status == FindingStatus::Fail) {
      out += "  [" + f.detail + " at point " + point_string(f.witness) + "]";
    } else if (f.status == FindingStatus::Pass) {
      out += "  [" + std::to_string(f.applicable_points) + " applicable points]";
    }
    out += "\n";
  }
}

}  // namespace

std::string report_text(const ClassificationReport& report, ReportView view) {
  std::string out;
  out += "metric " + report.spec_name + "  dim " + std::to_string(report.dim) + "\n";
  out += "command " + std::string(view_name(view)) + "  points " +
         std::to_string(report.points.size()) + " used, " +
         std::to_string(report.skipped.size()) + " skipped  order " +
         std::to_string(report.config.order) + "  seed " +
         std::to_string(report.config.seed) + "\n\n";

  switch (view) {
    case ReportView::Classify:
      text_verdicts(report, out);
      out += "\n";
      if (report.aggregate.identity_points > 0) {
        text_identities(report, out);
        out += "\n";
      }
      text_holonomy(report, out);
      out += "\n";
      break;
    case ReportView::Invariants:
      text_invariants(report, out);
      out += "\n";
      break;
    case ReportView::Identities:
      text_identities(report, out);
      out += "\n";
      break;
    case ReportView::Holonomy:
      text_holonomy(report, out);
      out += "\n";
      break;
  }
  text_consistency(report, out);
  out += std::string("result = ") + (report_clean(report) ? "pass" : "fail") + "\n";
  return out;
}

}  // namespace curv
