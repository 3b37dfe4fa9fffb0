system p5_secure {
  var h: int[0,1];
  var l: int[0,1];
  var o: int[0,1];
  init: o = 0;
  next: o' = l && h' = h && l' = l;
  final: true;
}
