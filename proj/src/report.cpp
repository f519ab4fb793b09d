#include "hjbsym/report.hpp"
