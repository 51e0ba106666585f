#include <map>

#include "realizer_internal.hpp"
#include "rootarr/errors.hpp"

namespace rootarr {

TargetModel build_target_model(const Arrangement& target, const RolleAssignment& rolle) {
  if (static_cast<int>(rolle.rolle_count.size()) != target.size())
    throw InvalidArrangement("Rolle assignment does not match the arrangement");
  TargetModel md;
  md.target = target;
  md.rolle = rolle;
  md.m_prime = target.m_prime();
  md.M = target.m() - target.m_prime();
  const auto& pos = target.positions();
  const int k = target.size();
  const int s = target.s();

  std::vector<int> w_index_at(k, -1);
  for (int i = 0; i < k; ++i)
    if (pos[i].p_mult > 0) {
      w_index_at[i] = static_cast<int>(md.w_position.size());
      md.w_position.push_back(i);
      md.w_mult.push_back(pos[i].p_mult);
    }
  md.q = static_cast<int>(md.w_position.size());

  // Rolle copies come first within a position.
  md.xi_roles.push_back({});
  md.u_xi.push_back(0);
  std::vector<int> first_xi(k, 0), last_xi(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int c = 0; c < pos[i].q_mult; ++c) {
      XiRole role;
      role.position = i;
      role.rolle = c < rolle.rolle_count[i];
      const int idx = static_cast<int>(md.xi_roles.size());
      if (!role.rolle) {
        role.u_index = static_cast<int>(md.u_xi.size());
        md.u_xi.push_back(idx);
      }
      md.xi_roles.push_back(role);
      if (c == 0) first_xi[i] = idx;
      last_xi[i] = idx;
    }
  }
  const int nxi = static_cast<int>(md.xi_roles.size()) - 1;
  const int nu = static_cast<int>(md.u_xi.size()) - 1;
  if (nu != 2 * md.M)
    throw InvalidArrangement("target has " + std::to_string(nu) + " non-Rolle roots, expected " +
                             std::to_string(2 * md.M));

  // g_p follows the w's at or left of u_{2p-1}.
  std::vector<std::vector<int>> g_after(md.q + 1);
  for (int p = 1; p <= md.M; ++p) {
    const int at = md.xi_roles[md.u_xi[2 * p - 1]].position;
    md.g_position.push_back(at);
    int interval = 0;
    while (interval < md.q && md.w_position[interval] <= at) ++interval;
    g_after[interval].push_back(p - 1);
  }
  for (int gi : g_after[0]) md.h_order.push_back({true, gi});
  for (int j = 0; j < md.q; ++j) {
    md.h_order.push_back({false, j});
    for (int gi : g_after[j + 1]) md.h_order.push_back({true, gi});
  }

  // Brackets for the spread rule: nearest xi strictly left and right.
  std::map<std::pair<int, int>, std::vector<std::size_t>> runs;
  for (std::size_t h = 0; h < md.h_order.size(); ++h) {
    const HSlot& slot = md.h_order[h];
    EtaSpec e;
    if (slot.is_g) {
      e.rule = EtaRule::TieToU;
      e.xi = md.u_xi[2 * slot.index + 1];
    } else {
      const int i = md.w_position[slot.index];
      if (pos[i].p_mult <= s && pos[i].q_mult > 0) {
        e.rule = EtaRule::Coincide;
        e.xi = first_xi[i];
      } else {
        e.rule = EtaRule::Spread;
        e.lo = 0;
        e.hi = nxi + 1;
        for (int x = 1; x <= nxi; ++x) {
          if (md.xi_roles[x].position < i) e.lo = x;
          if (md.xi_roles[x].position > i) {
            e.hi = x;
            break;
          }
        }
        runs[{e.lo, e.hi}].push_back(h);
      }
    }
    md.eta.push_back(e);
  }
  for (auto& [key, members] : runs) {
    for (std::size_t j = 0; j < members.size(); ++j) {
      md.eta[members[j]].slot = static_cast<int>(j);
      md.eta[members[j]].run = static_cast<int>(members.size());
    }
  }

  for (int x = 1; x <= nxi; ++x) {
    const XiRole& r = md.xi_roles[x];
    if (r.rolle) continue;
    const int i = r.position;
    PhiTerm t;
    t.xi = x;
    if (rolle.rolle_count[i] > 0) {
      t.anchor = first_xi[i];
    } else if (pos[i].p_mult > 0) {
      t.anchor_is_w = true;
      t.anchor = w_index_at[i];
    } else if (x != first_xi[i]) {
      t.anchor = first_xi[i];
    } else {
      md.least_generic = false;
      const int nb = i > 0 ? i - 1 : i + 1;
      t.shift = i > 0 ? 1 : -1;
      if (pos[nb].q_mult > 0) {
        t.anchor = i > 0 ? last_xi[nb] : first_xi[nb];
      } else {
        t.anchor_is_w = true;
        t.anchor = w_index_at[nb];
      }
    }
    md.phi.push_back(t);
  }
  return md;
}

FloatPolynomial build_family_polynomial(const SearchDomain& dom) {
  return detail::family_polynomial(dom.w, dom.mult, dom.g, dom.t, dom.v, dom.m_prime);
}

HpPolynomial build_family_polynomial_hp(const SearchDomain& dom) {
  auto cast = [](const std::vector<double>& v) { return std::vector<HpReal>(v.begin(), v.end()); };
  return detail::family_polynomial(cast(dom.w), dom.mult, cast(dom.g), cast(dom.t), dom.v, dom.m_prime);
}

TauOutput tau_map(const SearchDomain& dom, const TargetModel& model, double b) {
  const auto tv = detail::tau_eval(dom.w, dom.mult, dom.g, dom.t, dom.N, dom.v, dom.m_prime, model, b);
  TauOutput out;
  out.eta = tv.eta;
  out.zeta = tv.zeta;
  out.xi = tv.xi;
  out.theta = tv.theta;
  out.phi = tv.phi;
  return out;
}

std::vector<double> h_vector(const SearchDomain& dom, const TargetModel& model) {
  std::vector<double> h;
  for (const auto& slot : model.h_order) h.push_back(slot.is_g ? dom.g[slot.index] : dom.w[slot.index]);
  return h;
}

void set_h_vector(SearchDomain& dom, const TargetModel& model, const std::vector<double>& h) {
  for (std::size_t k = 0; k < model.h_order.size(); ++k) {
    const HSlot& slot = model.h_order[k];
    (slot.is_g ? dom.g[slot.index] : dom.w[slot.index]) = h[k];
  }
}

double tau_residual(const SearchDomain& dom, const TargetModel& model, double b) {
  return detail::tau_eval(dom.w, dom.mult, dom.g, dom.t, dom.N, dom.v, dom.m_prime, model, b).residual;
}

double tau_residual_hp(const std::vector<HpReal>& w, const std::vector<HpReal>& g, const std::vector<HpReal>& t,
                       const SearchDomain& shape, const TargetModel& model, double b) {
  return to_double(detail::tau_eval(w, shape.mult, g, t, shape.N, shape.v, shape.m_prime, model, b).residual);
}

}  // namespace rootarr
