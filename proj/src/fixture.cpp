#include "hirschfa/report.hpp"

namespace hirschfa::report {

namespace {

constexpr std::string_view kFixtureCsv =
    "scientist,g,h2,h,A,m,R,hw,N,S,C\n"
    "A,67,10,39,93.9,72,60.5,51.7,290,5997,20.7\n"
    "B,45,8,27,62.6,47,41.1,35.3,270,3177,11.8\n"
    "C,36,7,23,47.3,40,33.0,28.5,126,1661,13.2\n"
    "D,29,6,20,35.5,30.5,26.6,23.6,322,2124,6.6\n"
    "E,37,6,19,62.4,38,34.4,28.2,63,1439,22.8\n"
    "F,26,5,18,32.2,29,24.1,20.7,131,1127,8.6\n"
    "G,23,5,17,28.4,26,22.0,18.3,49,697,14.2\n"
    "H,26,6,16,35.9,30.5,24.0,21.4,70,749,10.7\n"
    "I,28,6,15,46.1,24,26.3,22.3,65,885,13.6\n"
    "J,23,5,15,32.1,23,21.9,18.1,51,574,11.3\n"
    "K,21,5,14,27.7,26.5,19.7,16.8,79,596,7.5\n"
    "L,22,5,14,30.6,23,20.7,17.8,88,681,7.7\n"
    "M,24,5,14,34.0,21,21.8,18.3,70,726,10.4\n"
    "N,22,5,14,27.7,26,19.7,17.7,72,687,9.5\n"
    "O,19,4,13,22.8,18,17.2,14.9,77,550,7.1\n"
    "P,24,5,13,41.5,27,23.2,20.5,47,631,13.4\n"
    "Q,15,4,13,17.1,17,14.9,13.0,86,422,4.9\n"
    "R,19,5,12,27.0,19.5,18.0,15.4,46,451,9.8\n"
    "S,18,4,12,22.8,18,16.6,13.8,61,439,7.2\n"
    "T,15,4,10,18.0,15.5,13.4,11.4,78,375,4.8\n"
    "U,17,4,10,23.7,23.5,15.4,13.4,44,351,8.0\n"
    "V,17,4,10,24.4,14.5,15.6,13.0,60,389,6.5\n"
    "W,13,3,9,15.6,12,11.8,10.1,53,261,4.9\n"
    "X,18,3,8,35.1,10.5,16.8,14.3,35,346,9.9\n"
    "Y,9,3,7,11.0,10,8.8,7.9,25,116,4.6\n"
    "Z,10,3,5,17.0,23,9.2,8.5,15,103,6.9\n";

using stats::Transform;
using efa::Rotation;

}  // namespace

const IndicatorTable& fixture() {
  static const IndicatorTable table = parse_indicator_table(kFixtureCsv);
  return table;
}

std::uint64_t table_checksum(const IndicatorTable& table) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : to_csv(table)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

const std::vector<DescriptiveExpectation>& descriptive_expectations() {
  static const std::vector<DescriptiveExpectation> rows = {
      {"Table 1", Transform::identity,
       {14.88, 25.58, 23.96, 5, 33.55, 22.18, 19.04},
       {14, 23.25, 22, 5, 29.5, 20.2, 17.75},
       {6.92, 12.95, 11.99, 1.6, 17.80, 10.82, 9.20},
       {.186, .198, .202, .230, .217, .199, .186},
       {.332, .260, .241, .125, .174, .255, .331},
       {.100, .114, .094, .189, .096, .090, .092},
       {.955, .887, .976, .312, .970, .983, .980}},
      {"Table A2", Transform::log,
       {2.61, 3.14, 3.08, 1.56, 3.41, 3, 2.86},
       {2.64, 3.15, 3.09, 1.60, 3.38, 3, 2.88},
       {.42, .45, .43, .30, .47, .43, .42},
       {.113, .114, .111, .174, .121, .110, .106},
       {.892, .885, .908, .408, .838, .912, .933},
       {.099, .116, .068, .181, .100, .073, .084},
       {.957, .876, .999, .364, .956, .999, .993}},
      {"Table A3", Transform::sqrt,
       {3.77, 4.93, 4.78, 2.21, 5.63, 4.60, 4.26},
       {3.74, 4.82, 4.69, 2.24, 5.43, 4.49, 4.21},
       {.82, 1.15, 1.10, .34, 1.39, 1.04, .95},
       {.145, .150, .153, .198, .167, .151, .147},
       {.645, .555, .576, .258, .464, .590, .629},
       {.099, .110, .081, .183, .078, .076, .080},
       {.958, .908, .995, .346, .997, .998, .996}},
  };
  return rows;
}

const std::vector<LoadingExpectation>& loading_expectations() {
  static const std::vector<LoadingExpectation> rows = {
      {"Table 3", "7", Transform::identity, Rotation::varimax,
       {{.842, .522}, {.752, .597}, {.722, .691}, {.789, .572}, {.536, .844}, {.718, .695}, {.732, .681}},
       {3.755, 3.094}},
      {"Table 3", "7", Transform::log, Rotation::varimax,
       {{.825, .496}, {.721, .525}, {.705, .705}, {.843, .514}, {.491, .871}, {.708, .703}, {.719, .694}},
       {3.667, 3.017}},
      {"Table 3", "7", Transform::log_shifted, Rotation::varimax,
       {{.828, .496}, {.728, .524}, {.707, .702}, {.839, .520}, {.494, .870}, {.709, .701}, {.722, .691}},
       {3.688, 3.01}},
      {"Table 3", "7", Transform::sqrt, Rotation::varimax,
       {{.841, .504}, {.742, .561}, {.717, .694}, {.812, .548}, {.514, .858}, {.716, .696}, {.728, .685}},
       {3.739, 3.042}},

      {"Table 4", "7", Transform::identity, Rotation::promax,
       {{.842, .183}, {.663, .350}, {.556, .504}, {.732, .290}, {.187, .848}, {.547, .514}, {.577, .484}},
       {}},
      {"Table 4", "7", Transform::log, Rotation::promax,
       {{.824, .173}, {.661, .279}, {.519, .543}, {.838, .186}, {.110, .914}, {.524, .538}, {.546, .518}},
       {}},
      {"Table 4", "7", Transform::log_shifted, Rotation::promax,
       {{.829, .170}, {.671, .272}, {.524, .537}, {.829, .196}, {.114, .910}, {.528, .534}, {.552, .512}},
       {}},
      {"Table 4", "7", Transform::sqrt, Rotation::promax,
       {{.848, .164}, {.670, .311}, {.546, .515}, {.778, .246}, {.148, .882}, {.542, .520}, {.568, .495}},
       {}},

      {"Table 5", "7+NS", Transform::identity, Rotation::varimax,
       {{.815, .545}, {.855, .436}, {.902, .434}, {.846, .463}, {.919, .301}, {.907, .422}, {.898, .443},
        {.375, .926}, {.765, .592}},
       {6.123, 2.561}},
      {"Table 5", "7+NS", Transform::log, Rotation::varimax,
       {{.672, .711}, {.766, .440}, {.847, .528}, {.779, .566}, {.914, .320}, {.853, .520}, {.854, .522},
        {.348, .890}, {.702, .712}},
       {5.269, 3.242}},
      {"Table 5", "7+NS", Transform::log_shifted, Rotation::varimax,
       {{.680, .705}, {.770, .441}, {.849, .525}, {.784, .563}, {.914, .319}, {.855, .516}, {.855, .520},
        {.349, .891}, {.703, .710}},
       {5.306, 3.220}},
      {"Table 5", "7+NS", Transform::sqrt, Rotation::varimax,
       {{.738, .640}, {.795, .476}, {.869, .494}, {.805, .535}, {.914, .321}, {.876, .481}, {.868, .498},
        {.363, .889}, {.715, .687}},
       {5.579, 3.013}},

      {"Table 6", "7+NC", Transform::identity, Rotation::varimax,
       {{.827, .536}, {.729, .620}, {.745, .666}, {.768, .591}, {.601, .769}, {.734, .679}, {.753, .658},
        {.909, .095}, {.162, .986}},
       {4.680, 3.931}},
      {"Table 6", "7+NC", Transform::log, Rotation::varimax,
       {{.812, .537}, {.591, .658}, {.689, .722}, {.722, .640}, {.500, .825}, {.681, .730}, {.688, .725},
        {.970, .131}, {.124, .992}},
       {4.148, 4.395}},
      {"Table 6", "7+NC", Transform::log_shifted, Rotation::varimax,
       {{.810, .542}, {.597, .659}, {.689, .722}, {.723, .642}, {.502, .824}, {.681, .730}, {.689, .725},
        {.969, .130}, {.124, .992}},
       {4.156, 4.399}},
      {"Table 6", "7+NC", Transform::sqrt, Rotation::varimax,
       {{.808, .552}, {.666, .644}, {.708, .704}, {.740, .625}, {.544, .803}, {.698, .715}, {.714, .701},
        {.948, .116}, {.138, .991}},
       {4.359, 4.248}},

      {"Table 7", "7+NC", Transform::identity, Rotation::promax,
       {{.777, .289}, {.623, .433}, {.622, .483}, {.682, .381}, {.403, .670}, {.604, .502}, {.635, .470},
        {1.065, -.282}, {-.224, 1.126}},
       {}},
      {"Table 7", "7+NC", Transform::log, Rotation::promax,
       {{.750, .315}, {.439, .547}, {.529, .584}, {.601, .474}, {.264, .782}, {.517, .596}, {.528, .588},
        {1.102, -.233}, {-.252, 1.133}},
       {}},
      {"Table 7", "7+NC", Transform::log_shifted, Rotation::promax,
       {{.746, .321}, {.445, .545}, {.529, .584}, {.603, .475}, {.266, .780}, {.517, .597}, {.529, .587},
        {1.101, -.234}, {-.252, 1.133}},
       {}},
      {"Table 7", "7+NC", Transform::sqrt, Rotation::promax,
       {{.743, .327}, {.534, .497}, {.560, .551}, {.631, .443}, {.322, .738}, {.544, .568}, {.568, .545},
        {1.090, -.254}, {-.243, 1.132}},
       {}},
  };
  return rows;
}

const std::vector<KmoExpectation>& kmo_expectations() {
  static const std::vector<KmoExpectation> rows = {
      {"Table 2", "7", Transform::identity, .737},
      {"Table 2", "7", Transform::log, .830},
      {"Table 2", "7", Transform::log_shifted, .813},
      {"Table 2", "7", Transform::sqrt, .744},
      {"Table 5 note", "7+NS", Transform::identity, .799},
      {"Table 5 note", "7+NS", Transform::log, .844},
      {"Table 6 note", "7+NC", Transform::identity, .758},
      {"Table 6 note", "7+NC", Transform::log, .819},
  };
  return rows;
}

const std::vector<CommunalityExpectation>& communality_expectations() {
  static const std::vector<CommunalityExpectation> rows = {
      {"Table A4", "7", Transform::identity, {.981, .921, .998, .949, .999, .999, .999}},
      {"Table A4", "7", Transform::log, {.926, .795, .993, .975, .999, .995, .999}},
      {"Table A4", "7", Transform::log_shifted, {.932, .804, .993, .975, .999, .995, .999}},
      {"Table A4", "7", Transform::sqrt, {.961, .866, .996, .960, .999, .997, .999}},
      {"Table A5", "7+NC", Transform::identity, {.971, .916, .998, .939, .953, .999, .999, .835, .999}},
      {"Table A5", "7+NC", Transform::log, {.948, .783, .995, .931, .931, .996, .999, .957, .999}},
      {"Table A5", "7+NC", Transform::log_shifted, {.951, .790, .995, .935, .931, .997, .999, .956, .999}},
      {"Table A5", "7+NC", Transform::sqrt, {.957, .859, .997, .938, .941, .999, .999, .913, .999}},
  };
  return rows;
}

const std::vector<VarianceExpectation>& variance_expectations() {
  static const std::vector<VarianceExpectation> rows = {
      {Transform::identity, 97.83, {53.64, 44.19}},
      {Transform::log, 95.48, {}},
      {Transform::log_shifted, 95.68, {}},
      {Transform::sqrt, 96.87, {}},
  };
  return rows;
}

}  // namespace hirschfa::report
