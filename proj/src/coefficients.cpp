#include "coefficients.hpp"

namespace sbpsat::operators::detail {

const FirstDerivativeTable& first_derivative_table(int order) {
  static const FirstDerivativeTable t2{
      2,
      {1.0 / 2.0},
      {1.0 / 2.0},
      {
          {-1.0 / 2.0, 1.0 / 2.0},
      }};
  static const FirstDerivativeTable t4{
      4,
      {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0},
      {2.0 / 3.0, -1.0 / 12.0},
      {
          {-1.0 / 2.0, 59.0 / 96.0, -1.0 / 12.0, -1.0 / 32.0},
          {-59.0 / 96.0, 0.0, 59.0 / 96.0},
          {1.0 / 12.0, -59.0 / 96.0, 0.0, 59.0 / 96.0, -1.0 / 12.0},
          {1.0 / 32.0, 0.0, -59.0 / 96.0, 0.0, 2.0 / 3.0, -1.0 / 12.0},
      }};
  static const FirstDerivativeTable t6{
      6,
      {13649.0 / 43200.0, 12013.0 / 8640.0, 2711.0 / 4320.0, 5359.0 / 4320.0, 7877.0 / 8640.0, 43801.0 / 43200.0},
      {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0},
      {
          {-0.500000000000000000000, 0.642459310382024426839, -0.0447716551083446209373, -0.142211730300446031557, 0.0329521103237541444948, 0.0115719647030120811602},
          {-0.642459310382024426839, 0.0, 0.399554523573330688146, 0.359552218285437389141, -0.0958649738992632270407, -0.0207824575774804234064},
          {0.0447716551083446209373, -0.399554523573330688146, 0.0, 0.380744849615797178760, -0.0146761767762910059210, -0.0112858043745201056311},
          {0.142211730300446031557, -0.359552218285437389141, -0.380744849615797178760, 0.0, 0.645542177894318342467, -0.0641235069601964727891, 0.0166666666666666666667},
          {-0.0329521103237541444948, 0.0958649738992632270407, 0.0146761767762910059210, -0.645542177894318342467, 0.0, 0.701286470875851587333, -0.150000000000000000000, 0.0166666666666666666667},
          {-0.0115719647030120811602, 0.0207824575774804234064, 0.0112858043745201056311, 0.0641235069601964727891, -0.701286470875851587333, 0.0, 0.750000000000000000000, -0.150000000000000000000, 0.0166666666666666666667},
      }};
  static const FirstDerivativeTable t8{
      8,
      {1498139.0 / 5080320.0, 1107307.0 / 725760.0, 20761.0 / 80640.0, 1304999.0 / 725760.0, 299527.0 / 725760.0, 103097.0 / 80640.0, 670091.0 / 725760.0, 5127739.0 / 5080320.0},
      {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0},
      {
          {-0.500000000000000000000, 0.664659453752682978496, -0.0172574677115888686269, -0.222781609460905356555, 0.0116283147336829100920, 0.0876981882338167854876, -0.0157149429610929617016, -0.00823193658659548719184},
          {-0.664659453752682978496, 0.0, 0.159353653568668032966, 0.724793722958236040185, -0.0468515742474427592261, -0.235359053324815515412, 0.0422252220867486013589, 0.0204974827112885786235},
          {0.0172574677115888686269, -0.159353653568668032966, 0.0, 0.134304139642928611072, 0.0291309398537077707677, -0.0238576222606121539789, 0.000972636835145684647678, 0.00154609178590925183050},
          {0.222781609460905356555, -0.724793722958236040185, -0.134304139642928611072, 0.0, 0.249733484632807383272, 0.493935032978478495786, -0.0743724516167755065837, -0.0329798128542510777714},
          {-0.0116283147336829100920, 0.0468515742474427592261, -0.0291309398537077707677, -0.249733484632807383272, 0.0, 0.302932586200697568594, -0.0772672632820725998763, 0.0215472706255589076165, -0.00357142857142857142857},
          {-0.0876981882338167854876, 0.235359053324815515412, 0.0238576222606121539789, -0.493935032978478495786, -0.302932586200697568594, 0.0, 0.719450534837278261478, -0.128625212533522604811, 0.0380952380952380952381, -0.00357142857142857142857},
          {0.0157149429610929617016, -0.0422252220867486013589, -0.000972636835145684647678, 0.0743724516167755065837, 0.0772672632820725998763, -0.719450534837278261478, 0.0, 0.760769926375421955513, -0.200000000000000000000, 0.0380952380952380952381, -0.00357142857142857142857},
          {0.00823193658659548719184, -0.0204974827112885786235, -0.00154609178590925183050, 0.0329798128542510777714, -0.0215472706255589076165, 0.128625212533522604811, -0.760769926375421955513, 0.0, 0.800000000000000000000, -0.200000000000000000000, 0.0380952380952380952381, -0.00357142857142857142857},
      }};
  switch (order) {
    case 2: return t2;
    case 4: return t4;
    case 6: return t6;
    case 8: return t8;
    default: throw Error(ErrorKind::UnknownVariant, "interior order must be 2, 4, 6 or 8");
  }
}

const SecondDerivativeTable& narrow_second_derivative_table(int order) {
  static const SecondDerivativeTable t2{
      2,
      {-2.0, 1.0},
      {-3.0 / 2.0, 2.0, -1.0 / 2.0},
      {
          {1.0, -2.0, 1.0},
      }};
  static const SecondDerivativeTable t4{
      4,
      {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0},
      {-11.0 / 6.0, 3.0, -3.0 / 2.0, 1.0 / 3.0},
      {
          {2.0, -5.0, 4.0, -1.0},
          {1.0, -2.0, 1.0},
          {-4.0 / 43.0, 59.0 / 43.0, -110.0 / 43.0, 59.0 / 43.0, -4.0 / 43.0},
          {-1.0 / 49.0, 0.0, 59.0 / 49.0, -118.0 / 49.0, 64.0 / 49.0, -4.0 / 49.0},
      }};
  static const SecondDerivativeTable t6{
      6,
      {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0},
      {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0},
      {
          {114170.0 / 40947.0, -438107.0 / 54596.0, 336409.0 / 40947.0, -276997.0 / 81894.0, 3747.0 / 13649.0, 21035.0 / 163788.0},
          {6173.0 / 5860.0, -2066.0 / 879.0, 3283.0 / 1758.0, -303.0 / 293.0, 2111.0 / 3516.0, -601.0 / 4395.0},
          {-52391.0 / 81330.0, 134603.0 / 32532.0, -21982.0 / 2711.0, 112915.0 / 16266.0, -46969.0 / 16266.0, 30409.0 / 54220.0},
          {68603.0 / 321540.0, -12423.0 / 10718.0, 112915.0 / 32154.0, -75934.0 / 16077.0, 53369.0 / 21436.0, -54899.0 / 160770.0, 48.0 / 5359.0},
          {-7053.0 / 39385.0, 86551.0 / 94524.0, -46969.0 / 23631.0, 53369.0 / 15754.0, -87904.0 / 23631.0, 820271.0 / 472620.0, -1296.0 / 7877.0, 96.0 / 7877.0},
          {21035.0 / 525612.0, -24641.0 / 131403.0, 30409.0 / 87602.0, -54899.0 / 131403.0, 820271.0 / 525612.0, -117600.0 / 43801.0, 64800.0 / 43801.0, -6480.0 / 43801.0, 480.0 / 43801.0},
      }};
  static const SecondDerivativeTable t8{
      8,
      {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0},
      {-137.0 / 60.0, 5.0, -5.0, 10.0 / 3.0, -5.0 / 4.0, 1.0 / 5.0},
      {
          {3.68715130328923310298, -12.4625739884467224136, 16.9285998949397726520, -11.8380185964545189946, 4.26725959023163912464, -0.551233683738588886156, -0.0248516844428241230456, -0.00633283537799046232876},
          {0.868378593615271197868, -1.45712692461789472699, 0.173477748453339873373, 0.512931017133896279252, -0.0372138372455812363497, -0.0797686722523069505985, 0.0161774378395431032245, 0.00314463707373246021832},
          {-0.0307385581748011487157, 1.02806611331407936444, -1.77288695821365206359, 0.435959294141776723117, 0.499559675405866659749, -0.161047186972106025569, -0.00921381043310264823716, 0.0103014309319391388091},
          {-0.0876407176309578597383, 0.435228000779681277373, 0.0624203989053607236003, -0.856430222471831021087, 0.164382002323616391730, 0.333266397361425609243, -0.0439428875945625733971, -0.00728297167273254772353},
          {0.0202929548683842031621, -0.137574050015166653019, 0.311632092565647769675, 0.716190355628431051594, -1.94418159021626650213, 1.06086723116911757764, -0.0330447829750387563732, 0.0101446109308418581449, -0.00432682195595054869845},
          {0.0292896180338648846314, -0.0951945030900621664240, -0.0324306298798984761616, 0.468719658067712993736, 0.342458913181429226498, -1.71822738042235152009, 1.07956353251613161700, -0.0926472530638000889785, 0.0198647875301900152284, -0.00139674287321648544575},
          {-0.00793736067819532589612, 0.0267327723574722761568, -0.00256919025268925671359, -0.0855785622669407046515, -0.0147708366627285451979, 1.49486838892977305945, -2.86250330563058642130, 1.64280080332847645606, -0.216615355227872035291, 0.0275067117749678774972, -0.00193406567167742888652},
          {-0.00185022436991181751699, 0.00475346941594029752466, 0.00262760730946198178797, -0.0129745088916596797003, 0.00414804539544151617545, -0.117352734313207372631, 1.50276412893134280400, -2.79256198598498465584, 1.58520392711095475023, -0.198150490888869343779, 0.0251619670969992817497, -0.00176920081150776199803},
      }};
  switch (order) {
    case 2: return t2;
    case 4: return t4;
    case 6: return t6;
    case 8: return t8;
    default: throw Error(ErrorKind::UnknownVariant, "interior order must be 2, 4, 6 or 8");
  }
}

}  // namespace sbpsat::operators::detail
