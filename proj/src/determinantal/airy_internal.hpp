#pragma once

#include <Eigen/Dense>

#include "pngd/quadrature.hpp"
#include "pngd/special_fn.hpp"

namespace pngd::detail {

double airy_kernel_from_values(double u, double v, const special::AiryValue& au, const special::AiryValue& av);
// W^{1/2} K W^{1/2} on the grid.
Eigen::MatrixXd airy_nystrom(const QuadratureGrid& g);

}  // namespace pngd::detail

namespace pngd::detail {

// Extended Airy kernel K(u_i, y; v_j, y2) on a tensor set of points.
Eigen::MatrixXd extended_airy_matrix(const std::vector<double>& u, double y, const std::vector<double>& v, double y2);

// B_t(j,x;j2,x2) g_{x2}(j2) / g_x(j) with g_x(n) = ((t+x)/(t-x))^{n/2}: the
// extended discrete Bessel kernel with the growing conjugation divided out.
double extended_bessel_conjugated(double t, int j, double x, int j2, double x2, double tol = 1e-15);

}  // namespace pngd::detail
