// Frozen golden values computed with an independent high-precision oracle
// (exact symbolic differentiation, arbitrary-precision arithmetic).
#ifndef HJBSYM_TEST_FIXTURES_HPP
#define HJBSYM_TEST_FIXTURES_HPP

#include <map>
#include <string>

namespace fixtures {

struct CaseGolden {
  double t, l, h;
  double V, Vt, Vl, Vh, Vll, Vlh, Vhh;
  double lambda, raw_residual, reduced_residual, pi, c;
};

inline const std::map<std::string, CaseGolden>& cases() {
  static const std::map<std::string, CaseGolden> m = {
    {"HARA_GEN_H3",
     {0.4, 1.3, 1.0,
      -4.69451493477209474751573088283, 0.7492534052045249591200019078, 0.83, -0.894, -0.56, 0.313, 0.0401,
      1.0, 0.398811530561560745567958699106, 0.398811530561560745567958699106, 1.44696428571428571428571428571, 0.667852442587078350942463148664}},
    {"HARA_EXP_H2",
     {0.666666666666666666666666666667, 1.3, 1.0,
      -2.35910251025993952889978502873, 0.692730753077981858669935508619, 0.83, -0.869, -0.56, -0.172, 1.0736,
      1.0, 0.365240417005118339519021555597, 0.365240417005118339519021555597, 0.927321428571428571428571428571, 0.48651476704575359322429447318}},
    {"HARA_EXP_H4_RK",
     {0.0, 1.3, 0.4,
      0.37, -0.111, 0.83, -0.21, -0.56, 0.07, -0.11,
      1.0, -0.467405772517211703958691910499, -0.467405772517211703958691910499, 1.14160714285714285714285714286, 0.725794745246044418638409057918}},
    {"HARA_EXP_H4_IG",
     {0.4, 1.3, 1.0,
      -2.5864014557238583850918840959, 0.67692043671715751552756522877, 0.83, -0.894, -0.56, 0.313, 0.0401,
      1.0, 0.318366208676064876465885820362, 0.318366208676064876465885820362, 1.44696428571428571428571428571, 0.57093036802623995443394160801}},
    {"HARA_EXP_H4_GEN",
     {1.60975609756097560975609756098, 1.3, 1.0,
      -1.77776049834795090348043341663, 0.528646850724943241504731188916, 0.625467188141059458946995707608, -0.654856610234434541957758156519, -0.422001958263847345795563368988, -0.129614887181038827637208749046, 0.809038039985833054368065773117,
      0.753574925471155974634934587479, 0.281858345126311292049412855314, 0.374028295792997127397809434385, 0.927321428571428571428571428571, 0.48651476704575359322429447318}},
    {"HARA_EXP_H5",
     {0.0, 1.3, 0.4,
      -2.96333333333333333333333333333, 1.1135, 0.83, -0.21, -0.56, 0.07, -0.11,
      1.0, 0.757094227482788296041308089501, 0.757094227482788296041308089501, 1.14160714285714285714285714286, 0.725794745246044418638409057918}},
    {"HARA_EXP_H7",
     {0.666666666666666666666666666667, 1.3, 1.0,
      -2.7457691769266061955664516954, 0.112730753077981858669935508619, 0.83, -0.869, -0.56, -0.172, 1.0736,
      1.0, -0.214759582994881660480978444403, -0.214759582994881660480978444403, 0.927321428571428571428571428571, 0.48651476704575359322429447318}},
    {"HARA_EXP_H8_ODE",
     {0.0, 1.2, 1.0,
      -2.43333333333333333333333333333, 0.73, 0.7, -0.39, -0.33, 0.046, 0.1398,
      1.0, 0.495983790649350649350649350649, 0.495983790649350649350649350649, 1.67454545454545454545454545455, 1.02040816326530612244897959184}},
    {"HARA_RES_H3",
     {20.0, 1.3, 1.0,
      -81.5030753077981858669935508619, 0.814530753077981858669935508619, 0.83, -0.869, -0.56, -0.172, 1.0736,
      1.0, 0.487040417005118339519021555597, 0.487040417005118339519021555597, 0.927321428571428571428571428571, 0.48651476704575359322429447318}},
    {"HARA_RES_H4",
     {0.0, 1.3, 0.4,
      -99.63, 0.9967, 0.83, -0.21, -0.56, 0.07, -0.11,
      1.0, 0.640294227482788296041308089501, 0.640294227482788296041308089501, 1.14160714285714285714285714286, 0.725794745246044418638409057918}},
    {"HARA_RES_H5",
     {20.0, 1.3, 1.0,
      -81.1030753077981858669935508619, 0.834530753077981858669935508619, 0.83, -0.869, -0.56, -0.172, 1.0736,
      1.0, 0.507040417005118339519021555597, 0.507040417005118339519021555597, 0.927321428571428571428571428571, 0.48651476704575359322429447318}},
    {"HARA_RES_H6",
     {8.23529411764705882352941176471, 1.3, 1.0,
      -91.6784927225994194649976983689, 0.915419041538860523209197552257, 0.933623040264309537756293720223, -0.977492074686367455795444870932, -0.62991434041929318210063190762, -0.193473690271640048788051228769, 1.20763577834670207197006860004,
      1.12484703646302353946541412075, 0.54704250753702037911058750019, 0.486326131290832625233307269883, 0.927321428571428571428571428571, 0.48651476704575359322429447318}},
    {"HARA_RES_H7",
     {0.0, 1.3, 0.4,
      -99.63, 0.982366666666666666666666666667, 0.83, -0.21, -0.56, 0.07, -0.11,
      1.0, 0.625960894149454962707974756168, 0.625960894149454962707974756168, 1.14160714285714285714285714286, 0.725794745246044418638409057918}},
    {"HARA_RES_H11_ODE",
     {0.0, 1.2, 1.0,
      -99.1, 0.991, 0.7, -0.39, -0.33, 0.046, 0.1398,
      1.0, 0.756983790649350649350649350649, 0.756983790649350649350649350649, 1.67454545454545454545454545455, 1.02040816326530612244897959184}},
    {"LOG_GEN_H1",
     {0.4, 1.3, 1.0,
      0.37, -0.21, 0.83, 3.48551493477209474751573088283, -0.56, -0.102, -3.35291493477209474751573088283,
      1.0, -1.09701502685040077834727642529, -1.09701502685040077834727642529, 1.00232142857142857142857142857, 1.1557269942223192278554239853}},
    {"LOG_EXP_H2",
     {0.4, 1.3, 1.0,
      1.09386853861782760248399711548, -0.949004867287358541614494794784, 2.4538132082508024596262637996, -0.233555715002184812422258843576, -1.6555848152053606956514550937, -0.301552948483833555279372177782, 0.625574548031168434285442674692,
      2.9564014557238583850918840959, -2.56653756583926541893389366764, -0.868128907483189907275813516648, 1.00232142857142857142857142857, 0.361445783132530120481927710843}},
    {"LOG_EXP_H4_RK",
     {0.0, 1.3, 0.4,
      0.37, -0.111, 0.83, -0.21, -0.56, 0.07, -0.11,
      1.0, -0.883485832879935126868060742494, -0.883485832879935126868060742494, 1.14160714285714285714285714286, 1.20481927710843373493975903614}},
    {"LOG_EXP_H4_GEN",
     {-0.689655172413793103448275862069, 1.3, 1.0,
      2.09485359373128816454800193692, -2.85638001950726485622400358037, 1.02077993119195842068973088511, -1.06874428940459261154141703514, -0.688718989719875560947288308028, -0.21153511827110463657666712318, 1.32037269172010428970180129911,
      1.22985533878549207312015769291, -3.74954679272817974002807581727, -3.0487705947846970316299655044, 0.927321428571428571428571428571, 1.20481927710843373493975903614}},
    {"LOG_EXP_H5",
     {0.0, 1.3, 0.4,
      0.37, 0.184766666666666666666666666667, 0.83, -0.21, -0.56, 0.07, -0.11,
      1.0, -0.587719166213268460201394075827, -0.587719166213268460201394075827, 1.14160714285714285714285714286, 1.20481927710843373493975903614}},
    {"LOG_EXP_H7",
     {0.4, 1.3, 1.0,
      0.37, -0.21, 0.83, 0.877401455723858385091884095899, -0.56, -0.102, -0.744801455723858385091884095899,
      1.0, -1.01340136885348548902037125126, -1.01340136885348548902037125126, 1.00232142857142857142857142857, 1.06857883941826206690068099852}},
    {"LOG_EXP_H8_ODE",
     {0.0, 1.2, 1.0,
      3.0, -0.9, 2.33333333333333333333333333333, 0.533333333333333333333333333333, -1.1, -1.01333333333333333333333333333, 0.682666666666666666666666666667,
      3.33333333333333333333333333333, -2.58486578765993088643738023379, -0.775459736297979265931214070138, 1.03818181818181818181818181818, 0.428571428571428571428571428571}},
  };
  return m;
}

// prolongation coefficients (eta^t, eta^l, eta^h, eta^ll, eta^lh, eta^hh)
// at the pinned jet t=1, l=2, h=1, V=0.3, first derivs 0.1, Vll=-0.2,
// Vlh=Vhh=0.1, benchmark parameters
inline constexpr double prolong_U2[6] = {-0.00204040268005351162032028784097, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double prolong_U3_HARA_EXP[6] = {-0.320409110340858933033436889659, -0.05, -0.05, 0.3, -0.15, -0.15};
inline constexpr double prolong_U4[6] = {-0.03, -0.03, -0.03, 0.06, -0.03, -0.03};

inline constexpr double log_exp_pinned_residual = -0.683409878245040748285007425531;
inline constexpr double hara_exp_pinned_residual = -0.283465948122951345674086956047;
inline constexpr double merton_D = 0.27875;
inline constexpr double merton_A = 1.89405489524151353388217375435;
inline constexpr double merton_consumption_fraction = 0.5575;
inline constexpr double merton_log_bM = -2.0998061376592693259560795511;
inline constexpr double superexp_F_at_04 = -5.06451493477209474751573088283;
inline constexpr double superexp_Phib_at_04 = 0.9592534052045249591200019078;
inline constexpr double superexp_Phibp_at_04 = -0.103599367762088695584960206042;
inline constexpr double superexp_F_at_2 = -3.66642231976073562791375324574;

// pinned reduced jet used by the case goldens
inline constexpr double rj2[6] = {(37.0/100.0), (83.0/100.0), (-21.0/100.0), (-14.0/25.0), (7.0/100.0), (-11.0/100.0)};
inline constexpr double rj1[3] = {(9.0/10.0), (7.0/10.0), (-33.0/100.0)};
inline constexpr double rj_p1 = 1.3;
inline constexpr double rj_p2 = 0.4;
inline constexpr double rj1_p1 = 1.2;

}  // namespace fixtures

#endif
