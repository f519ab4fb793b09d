#ifndef HJBSYM_REPORT_HPP
#define HJBSYM_REPORT_HPP
#endif
